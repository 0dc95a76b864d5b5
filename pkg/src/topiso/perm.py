"""Permutation groups via stabilizer chains, cosets and labeling cosets.

Permutations are tuples of images: ``p[i]`` is the image of ``i``.
Products read left to right: ``mul(p, q)`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

from functools import cached_property, reduce
from itertools import product as _cartesian
from typing import Iterable, Mapping, Sequence

Perm = tuple


# ------------------------------------------------------------------ basics

def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(i == x for i, x in enumerate(p))


def check_perm(p: Sequence[int], n: int | None = None) -> Perm:
    p = tuple(int(x) for x in p)
    if n is not None and len(p) != n:
        raise ValueError(f"permutation degree {len(p)} differs from {n}")
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation")
    return p


def from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Perm:
    p = list(range(n))
    for cyc in cycles:
        cyc = list(cyc)
        for i, x in enumerate(cyc):
            p[x] = cyc[(i + 1) % len(cyc)]
    return check_perm(p, n)


def to_cycles(p: Perm) -> list[tuple]:
    seen, out = set(), []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_string(p: Perm) -> str:
    cyc = to_cycles(p)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def parse_cycles(text: str, n: int) -> Perm:
    text = text.strip()
    cycles = []
    for chunk in text.replace(")", ")\n").splitlines():
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"bad cycle notation {text!r}")
        body = chunk[1:-1].replace(",", " ").split()
        if body:
            cycles.append([int(x) for x in body])
    return from_cycles(cycles, n)


# --------------------------------------------------------------- PermGroup

class PermGroup:
    """A permutation group on ``0..degree-1`` held as a stabilizer chain.

    ``base`` is the chain's base, ``levels[i]`` the strong generators fixing
    ``base[:i]`` pointwise and ``transversals[i]`` maps each point of the
    orbit of ``base[i]`` under ``levels[i]`` to an element carrying
    ``base[i]`` there.  The chain is built by deterministic Schreier-Sims.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (), base: Sequence[int] = ()):
        self.degree = int(degree)
        gens = []
        for g in generators:
            g = check_perm(g, self.degree)
            if not is_identity(g) and g not in gens:
                gens.append(g)
        self.generators = gens
        self.base = [int(b) for b in base]
        self._levels = None
        if len(set(self.base)) != len(self.base) or any(not 0 <= b < self.degree for b in self.base):
            raise ValueError("bad base prefix")
        self._blocks = None
        self._schreier_sims()

    # -- construction ------------------------------------------------------
    @classmethod
    def _from_chain(cls, degree, generators, base, levels, transversals, blocks=None):
        self = cls.__new__(cls)
        self.degree = degree
        self.generators = generators
        self.base = base
        self._levels = levels
        self.transversals = transversals
        self._blocks = blocks
        return self

    @classmethod
    def symmetric_product(cls, blocks: Iterable[Iterable[int]], degree: int, base: Sequence[int] = ()) -> "PermGroup":
        """The Young group ``Sym(B1) x Sym(B2) x ...`` with a direct chain."""
        blocks = [sorted(set(b)) for b in blocks if len(set(b)) > 1]
        seen = set()
        for b in blocks:
            if seen & set(b):
                raise ValueError("blocks overlap")
            seen |= set(b)
        where = {x: i for i, b in enumerate(blocks) for x in b}
        order = [b for b in base if b in where]
        rest = [x for b in blocks for x in b if x not in set(order)]
        order += rest
        pos = {x: i for i, x in enumerate(order)}
        idn = identity(degree)

        def transposition(a, b):
            p = list(idn)
            p[a], p[b] = b, a
            return tuple(p)

        full_base = list(base) + [x for x in order if x not in set(base)]
        transversals = []
        for b in full_base:
            tr = {b: idn}
            if b in where:
                for y in blocks[where[b]]:
                    if pos[y] > pos[b]:
                        tr[y] = transposition(b, y)
            transversals.append(tr)
        generators = [transposition(b[i], b[i + 1]) for b in blocks for i in range(len(b) - 1)]
        return cls._from_chain(degree, generators, full_base, None, transversals, blocks)

    @property
    def levels(self):
        if self._levels is None:
            # Young group: level i is generated by adjacent transpositions of
            # the block points that come after base[:i]
            idn = identity(self.degree)
            pos = {x: i for i, x in enumerate(self.base)}
            out = []
            for i in range(len(self.base)):
                gens = []
                for b in self._blocks:
                    rest = sorted((x for x in b if pos[x] >= i), key=pos.get)
                    for a, c in zip(rest, rest[1:]):
                        p = list(idn)
                        p[a], p[c] = c, a
                        gens.append(tuple(p))
                out.append(gens)
            self._levels = out
        return self._levels

    @levels.setter
    def levels(self, value):
        self._levels = value

    def _orbit_transversal(self, point, gens):
        idn = identity(self.degree)
        tr = {point: idn}
        queue = [point]
        for x in queue:
            for s in gens:
                y = s[x]
                if y not in tr:
                    tr[y] = mul(tr[x], s)
                    queue.append(y)
        return tr

    def _schreier_sims(self):
        n = self.degree
        base = list(self.base)
        for g in self.generators:
            if all(g[b] == b for b in base):
                base.append(next(i for i in range(n) if g[i] != i))
        levels = [[g for g in self.generators if all(g[b] == b for b in base[:i])] for i in range(len(base))]
        trans = [self._orbit_transversal(base[i], levels[i]) for i in range(len(base))]
        i = len(base) - 1
        while i >= 0:
            restart = None
            for beta in list(trans[i]):
                u = trans[i][beta]
                for s in levels[i]:
                    sg = mul(mul(u, s), inv(trans[i][s[beta]]))
                    if is_identity(sg):
                        continue
                    h, j = self._sift_from(sg, i + 1, base, trans)
                    if j < len(base) or not is_identity(h):
                        if j == len(base):
                            base.append(next(x for x in range(n) if h[x] != x))
                            levels.append([])
                            trans.append({base[-1]: identity(n)})
                        for l in range(i + 1, j + 1):
                            levels[l].append(h)
                            trans[l] = self._orbit_transversal(base[l], levels[l])
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1
        self.base = base
        self.levels = levels
        self.transversals = trans

    @staticmethod
    def _sift_from(g, start, base, trans):
        for j in range(start, len(base)):
            b = g[base[j]]
            if b not in trans[j]:
                return g, j
            g = mul(g, inv(trans[j][b]))
        return g, len(base)

    # -- queries -----------------------------------------------------------
    def order(self) -> int:
        return reduce(lambda a, t: a * len(t), self.transversals, 1)

    def sift(self, g: Perm) -> tuple[Perm, int]:
        return self._sift_from(g, 0, self.base, self.transversals)

    def contains(self, g: Sequence[int]) -> bool:
        g = check_perm(g, self.degree)
        h, j = self.sift(g)
        return j == len(self.base) and is_identity(h)

    __contains__ = contains

    @cached_property
    def strong_generators(self) -> list:
        out = []
        for lvl in self.levels:
            for g in lvl:
                if g not in out:
                    out.append(g)
        return out or list(self.generators)

    def orbits(self) -> list[list[int]]:
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for x in range(self.degree):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for x in range(self.degree):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def orbit(self, x: int) -> list[int]:
        return sorted(self._orbit_transversal(x, self.generators))

    def with_base(self, prefix: Sequence[int]) -> "PermGroup":
        """The same group with a chain whose base starts with ``prefix``."""
        prefix = list(prefix)
        if self.base[: len(prefix)] == prefix:
            return self
        if self._blocks is not None:
            return PermGroup.symmetric_product(self._blocks, self.degree, prefix)
        return PermGroup(self.degree, self.strong_generators, prefix)

    def pointwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        pts = sorted(set(points))
        if any(not 0 <= p < self.degree for p in pts):
            raise ValueError("point out of range")
        if self._blocks is not None:
            blocks = [[x for x in b if x not in set(pts)] for b in self._blocks]
            return PermGroup.symmetric_product(blocks, self.degree)
        g = self.with_base(pts)
        k = len(pts)
        gens = g.levels[k] if k < len(g.base) else []
        return PermGroup(self.degree, gens)

    def set_stabilizer_check(self, points: Iterable[int]) -> bool:
        pts = set(points)
        return all({g[x] for x in pts} == pts for g in self.generators)

    def is_trivial(self) -> bool:
        return self.order() == 1

    def elements(self):
        """Iterate over all elements (only sensible for small groups)."""
        levels = [list(t.values()) for t in self.transversals]
        idn = identity(self.degree)
        for combo in _cartesian(*reversed(levels)):
            g = idn
            for u in combo:
                g = mul(g, u)
            yield g

    def equals(self, other: "PermGroup") -> bool:
        return (
            self.degree == other.degree
            and self.order() == other.order()
            and all(other.contains(g) for g in self.generators)
        )

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"

    def element_mapping(self, targets: Mapping[int, int]) -> Perm | None:
        """Some element sending each key to its value, or None."""
        keys = list(targets)
        g = self.with_base(keys)
        f = identity(self.degree)  # result = x then f
        want = dict(targets)
        for j, b in enumerate(keys):
            d = inv(f)[want[b]]
            if d not in g.transversals[j]:
                return None
            f = mul(g.transversals[j][d], f)
        return f


def from_generators(gens: Iterable[Sequence[int]], degree: int | None = None) -> PermGroup:
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree needed for an empty generator list")
        degree = len(gens[0])
    for g in gens:
        if len(g) != degree:
            raise ValueError("generators of different degree")
    return PermGroup(degree, gens)


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree)


def symmetric_group(degree: int) -> PermGroup:
    return PermGroup.symmetric_product([range(degree)], degree)


# ------------------------------------------------------------------ cosets

class Coset:
    """A coset ``Gamma * rep`` of bijections from ``domain`` onto ``codomain``.

    ``domain`` and ``codomain`` are tuples of hashable labels.  ``group``
    acts on domain positions and ``rep[i]`` is the codomain position that
    ``domain[i]`` is sent to.  An element ``gamma * rep`` sends ``domain[i]``
    to ``codomain[rep[gamma[i]]]``.
    """

    def __init__(self, domain, codomain, group: PermGroup | None, rep: Sequence[int] | None):
        self.domain = tuple(domain)
        self.codomain = tuple(codomain)
        if len(self.domain) != len(self.codomain):
            raise ValueError("domain and codomain differ in size")
        self.empty = rep is None
        self.rep = None if self.empty else check_perm(rep, len(self.domain))
        self.group = group if group is not None else PermGroup(len(self.domain))
        if self.group.degree != len(self.domain):
            raise ValueError("group degree differs from domain size")

    @cached_property
    def dpos(self):
        return {x: i for i, x in enumerate(self.domain)}

    @cached_property
    def cpos(self):
        return {x: i for i, x in enumerate(self.codomain)}

    # -- constructors ------------------------------------------------------
    @classmethod
    def empty_coset(cls, domain, codomain) -> "Coset":
        domain, codomain = tuple(domain), tuple(codomain)
        if len(domain) != len(codomain):
            codomain = domain
        return cls(domain, codomain, None, None)

    @classmethod
    def from_map(cls, mapping: Mapping, group_gens: Iterable[Mapping] = ()) -> "Coset":
        """Coset from one bijection and automorphisms of its domain, all as dicts."""
        domain = tuple(sorted(mapping))
        codomain = tuple(sorted(mapping.values()))
        if len(set(codomain)) != len(codomain):
            raise ValueError("not a bijection")
        dpos = {x: i for i, x in enumerate(domain)}
        cpos = {x: i for i, x in enumerate(codomain)}
        rep = tuple(cpos[mapping[x]] for x in domain)
        gens = [tuple(dpos[g[x]] for x in domain) for g in group_gens]
        return cls(domain, codomain, PermGroup(len(domain), gens), rep)

    @classmethod
    def young(cls, domain, codomain, dom_colors: Mapping, cod_colors: Mapping) -> "Coset":
        """All bijections ``domain -> codomain`` that preserve the given colors."""
        domain, codomain = tuple(domain), tuple(codomain)
        if len(domain) != len(codomain):
            return cls.empty_coset(domain, codomain)
        by_color: dict = {}
        for i, x in enumerate(domain):
            by_color.setdefault(dom_colors[x], [[], []])[0].append(i)
        for j, y in enumerate(codomain):
            if cod_colors[y] not in by_color:
                return cls.empty_coset(domain, codomain)
            by_color[cod_colors[y]][1].append(j)
        rep = [0] * len(domain)
        blocks = []
        for c in sorted(by_color, key=repr):
            src, dst = by_color[c]
            if len(src) != len(dst):
                return cls.empty_coset(domain, codomain)
            for i, j in zip(src, dst):
                rep[i] = j
            blocks.append(src)
        group = PermGroup.symmetric_product(blocks, len(domain))
        return cls(domain, codomain, group, rep)

    # -- queries -----------------------------------------------------------
    def __bool__(self):
        return not self.empty

    def size(self) -> int:
        return 0 if self.empty else self.group.order()

    def representative(self) -> dict | None:
        if self.empty:
            return None
        return {x: self.codomain[self.rep[i]] for i, x in enumerate(self.domain)}

    def map_of(self, gamma: Perm) -> dict:
        return {x: self.codomain[self.rep[gamma[i]]] for i, x in enumerate(self.domain)}

    def _as_perm(self, mapping: Mapping) -> Perm | None:
        try:
            p = tuple(self.cpos[mapping[x]] for x in self.domain)
        except KeyError:
            return None
        if len(set(p)) != len(p) or len(mapping) != len(self.domain):
            return None
        return p

    def contains(self, mapping: Mapping) -> bool:
        if self.empty:
            return False
        p = self._as_perm(mapping)
        if p is None:
            return False
        return self.group.contains(mul(p, inv(self.rep)))

    __contains__ = contains

    def elements(self):
        if self.empty:
            return
        for g in self.group.elements():
            yield self.map_of(g)

    def automorphism_maps(self) -> list[dict]:
        """Generators of the group as maps on domain labels."""
        return [{x: self.domain[g[i]] for i, x in enumerate(self.domain)} for g in self.group.generators]

    # -- operations --------------------------------------------------------
    def restrict(self, subset: Iterable) -> "Coset":
        """Induced coset on an invariant subset of the domain."""
        sub = tuple(sorted(set(subset)))
        if self.empty:
            return Coset.empty_coset(sub, sub)
        pos = [self.dpos[x] for x in sub]
        ps = set(pos)
        for g in self.group.generators:
            if {g[i] for i in ps} != ps:
                raise ValueError("subset is not invariant under the coset's group")
        image = tuple(sorted(self.codomain[self.rep[i]] for i in pos))
        ipos = {y: k for k, y in enumerate(image)}
        local = {i: k for k, i in enumerate(pos)}
        rep = tuple(ipos[self.codomain[self.rep[i]]] for i in pos)
        gens = [tuple(local[g[i]] for i in pos) for g in self.group.generators]
        return Coset(sub, image, PermGroup(len(sub), gens), rep)

    def inverse(self) -> "Coset":
        if self.empty:
            return Coset.empty_coset(self.codomain, self.domain)
        r = self.rep
        ri = inv(r)
        gens = [mul(mul(ri, g), r) for g in self.group.generators]
        return Coset(self.codomain, self.domain, PermGroup(len(r), gens), ri)

    def then(self, mapping: Mapping) -> "Coset":
        """Compose every element with a fixed bijection applied afterwards."""
        if self.empty:
            return Coset.empty_coset(self.domain, tuple(sorted(mapping[y] for y in self.codomain)))
        new_cod = tuple(sorted(mapping[y] for y in self.codomain))
        npos = {y: i for i, y in enumerate(new_cod)}
        rep = tuple(npos[mapping[self.codomain[j]]] for j in self.rep)
        return Coset(self.domain, new_cod, self.group, rep)

    def element_with(self, partial: Mapping) -> dict | None:
        """An element extending ``partial`` (domain label -> codomain label)."""
        if self.empty:
            return None
        targets = {}
        ri = inv(self.rep)
        for x, y in partial.items():
            if x not in self.dpos or y not in self.cpos:
                return None
            targets[self.dpos[x]] = ri[self.cpos[y]]
        g = self.group.element_mapping(targets)
        return None if g is None else self.map_of(g)

    def sub_coset(self, partial: Mapping) -> "Coset":
        """All elements that extend ``partial``."""
        el = self.element_with(partial)
        if el is None:
            return Coset.empty_coset(self.domain, self.codomain)
        stab = self.group.pointwise_stabilizer(self.dpos[x] for x in partial)
        rep = self._as_perm(el)
        return Coset(self.domain, self.codomain, stab, rep)

    @staticmethod
    def join(cosets: Sequence["Coset"], domain=None, codomain=None) -> "Coset":
        """Smallest coset containing all the given cosets (on equal domains).

        Exact whenever the union is itself a coset, which holds for unions of
        subsets of one isomorphism set.
        """
        live = [c for c in cosets if not c.empty]
        if not live:
            if cosets:
                return Coset.empty_coset(cosets[0].domain, cosets[0].codomain)
            return Coset.empty_coset(domain or (), codomain or ())
        first = live[0]
        for c in live[1:]:
            if c.domain != first.domain or c.codomain != first.codomain:
                raise ValueError("cannot join cosets on different domains")
        gens = []
        ri = inv(first.rep)
        for c in live:
            gens += c.group.generators
            d = mul(c.rep, ri)
            if not is_identity(d):
                gens.append(d)
        return Coset(first.domain, first.codomain, PermGroup(len(first.domain), gens), first.rep)

    def equals(self, other: "Coset") -> bool:
        if self.empty or other.empty:
            return self.empty == other.empty
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return self.group.equals(other.group) and self.contains(other.representative())

    def __repr__(self):
        if self.empty:
            return f"Coset(empty, |domain|={len(self.domain)})"
        return f"Coset(|domain|={len(self.domain)}, size={self.size()})"


# -------------------------------------------------------- labeling cosets

class LabelingCoset:
    """A labeling coset ``rho * Theta`` of a finite set.

    ``rho`` maps each domain element to a label in ``0..k-1`` and ``Theta``
    is a group on labels; the coset consists of ``x -> theta(rho(x))``.
    """

    def __init__(self, domain: Iterable, rho: Mapping, theta: PermGroup | None = None):
        self.domain = tuple(sorted(domain))
        k = len(self.domain)
        self.rho = {x: int(rho[x]) for x in self.domain}
        if sorted(self.rho.values()) != list(range(k)):
            raise ValueError("rho must be a bijection onto 0..k-1")
        self.theta = theta if theta is not None else PermGroup(k)
        if self.theta.degree != k:
            raise ValueError("theta degree must equal the domain size")

    @classmethod
    def full(cls, domain: Iterable) -> "LabelingCoset":
        dom = sorted(domain)
        return cls(dom, {x: i for i, x in enumerate(dom)}, symmetric_group(len(dom)))

    @classmethod
    def from_coset(cls, coset: Coset, labels: Mapping) -> "LabelingCoset":
        """Pull a coset ``A -> B`` back along a labeling ``B -> 0..k-1``."""
        if coset.empty:
            raise ValueError("empty coset has no labeling")
        rep = coset.representative()
        rho = {x: labels[rep[x]] for x in coset.domain}
        # theta = rep^-1 Gamma rep, expressed on labels
        theta_gens = []
        for g in coset.automorphism_maps():
            # label rho(x) -> rho(g(x))
            t = [0] * len(rho)
            for x in coset.domain:
                t[rho[x]] = rho[g[x]]
            theta_gens.append(tuple(t))
        return cls(coset.domain, rho, PermGroup(len(rho), theta_gens))

    @property
    def size(self) -> int:
        return self.theta.order()

    def contains(self, labeling: Mapping) -> bool:
        if set(labeling) != set(self.domain):
            return False
        t = [0] * len(self.domain)
        for x in self.domain:
            t[self.rho[x]] = labeling[x]
        try:
            t = check_perm(t, len(self.domain))
        except ValueError:
            return False
        return self.theta.contains(t)

    def elements(self):
        for th in self.theta.elements():
            yield {x: th[self.rho[x]] for x in self.domain}

    @cached_property
    def lexmin(self) -> tuple:
        """Lexicographically least ``(l(x) for x in domain)`` over the coset."""
        base = [self.rho[x] for x in self.domain]
        g = self.theta.with_base(base)
        f = identity(len(base))
        out = []
        for j, b in enumerate(base):
            p = min(g.transversals[j], key=lambda q: f[q])
            f = mul(g.transversals[j][p], f)
            out.append(f[b])
        return tuple(out)

    def key(self) -> tuple:
        """Hashable invariant; equal labeling cosets have equal keys."""
        return (self.domain, self.lexmin, self.theta.order())

    def __eq__(self, other):
        if not isinstance(other, LabelingCoset):
            return NotImplemented
        return self.key() == other.key() and self.theta.equals(other.theta)

    def __hash__(self):
        return hash(self.key())

    def transport(self, phi: Mapping) -> "LabelingCoset":
        """The labeling coset ``phi^-1 rho Theta`` on ``phi(domain)``."""
        rho = {phi[x]: self.rho[x] for x in self.domain}
        return LabelingCoset(rho.keys(), rho, self.theta)

    def __repr__(self):
        return f"LabelingCoset(domain={self.domain}, |Theta|={self.size})"
