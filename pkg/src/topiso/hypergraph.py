"""Isomorphism of hypergraphs, coset-labeled hypergraphs and
multiple-labeling-cosets, restricted to a given coset of bijections.

All three problems are solved exactly by backtracking over the stabilizer
chain of the restricting coset.  Every hyperedge is checked the moment all of
its vertices (or all of its image vertices) are assigned.  The result is
returned as ``Aut * phi0`` where the automorphism group is found level by
level with orbit pruning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .perm import Coset, LabelingCoset, PermGroup, identity, is_identity, mul

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """The search exceeded its node budget; the answer is unknown."""


def canonical_color(c):
    """Multisets (lists, tuples of mixed order, Counters) are sorted into tuples."""
    if isinstance(c, (list, tuple)):
        return tuple(canonical_color(x) for x in c)
    if isinstance(c, (set, frozenset)):
        return tuple(sorted((canonical_color(x) for x in c), key=repr))
    return c


def multiset(items: Iterable) -> tuple:
    return tuple(sorted((canonical_color(x) for x in items), key=repr))


# ----------------------------------------------------------------- objects

def _parts(lc) -> tuple:
    """A label is None, one labeling coset, or a tuple of them that must all hold."""
    if lc is None:
        return ()
    if isinstance(lc, tuple):
        return lc
    return (lc,)


def transport_label(lc, phi: Mapping):
    if lc is None:
        return None
    if isinstance(lc, tuple):
        return tuple(part.transport(phi) for part in lc)
    return lc.transport(phi)

@dataclass
class CosetLabeledHypergraph:
    """Hypergraph whose hyperedges carry ``(labeling coset or None, color)``.

    A label of ``None`` leaves the hyperedge unconstrained beyond its color,
    which gives ordinary (colored) hypergraphs.
    """

    vertices: tuple
    labels: dict = field(default_factory=dict)

    def __init__(self, vertices: Iterable, edges: Mapping | Iterable = ()):
        self.vertices = tuple(sorted(set(vertices)))
        vs = set(self.vertices)
        self.labels = {}
        items = edges.items() if isinstance(edges, Mapping) else ((e, (None, 0)) for e in edges)
        for e, lab in items:
            e = frozenset(e)
            if not e <= vs:
                raise ValueError(f"hyperedge {sorted(e)} leaves the vertex set")
            if e in self.labels:
                raise ValueError(f"hyperedge {sorted(e)} listed twice")
            lc, color = lab
            for part in _parts(lc):
                if set(part.domain) != set(e):
                    raise ValueError("labeling coset domain must equal its hyperedge")
            self.labels[e] = (lc, canonical_color(color))

    @property
    def hyperedges(self) -> list:
        return list(self.labels)

    def max_edge_size(self) -> int:
        return max((len(e) for e in self.labels), default=0)


@dataclass
class MultipleLabelingCoset:
    """A set of labeling cosets of one vertex set, each with a color.

    Equal labeling cosets listed more than once are merged and their colors
    collected into a multiset.
    """

    vertices: tuple
    cosets: list

    def __init__(self, vertices: Iterable, cosets: Iterable[tuple]):
        self.vertices = tuple(sorted(set(vertices)))
        merged: list[list] = []
        for lc, color in cosets:
            if set(lc.domain) != set(self.vertices):
                raise ValueError("every labeling coset must cover the whole vertex set")
            for entry in merged:
                if entry[0] == lc:
                    entry[1].append(color)
                    break
            else:
                merged.append([lc, [color]])
        self.cosets = [
            (lc, canonical_color(cs[0]) if len(cs) == 1 else ("multi", multiset(cs))) for lc, cs in merged
        ]


# ------------------------------------------------------------------ search

class _ThetaIds:
    """Assigns equal ids to equal label groups."""

    def __init__(self):
        self.reps: dict = {}

    def __call__(self, g: PermGroup) -> int:
        key = (g.degree, g.order())
        bucket = self.reps.setdefault(key, [])
        for i, other in bucket:
            if other is g or other.equals(g):
                return i
        i = sum(len(b) for b in self.reps.values())
        bucket.append((i, g))
        return i


class _Side:
    def __init__(self, hg: CosetLabeledHypergraph, pos: Mapping, theta_ids: _ThetaIds):
        self.edges = {}
        self.incident: dict[int, list] = {i: [] for i in pos.values()}
        for e, (lc, color) in hg.labels.items():
            pe = frozenset(pos[x] for x in e)
            parts = []
            for part in _parts(lc):
                rho = {pos[x]: part.rho[x] for x in part.domain}
                rho_inv = [None] * len(rho)
                for p, l in rho.items():
                    rho_inv[l] = p
                full = part.theta.order() == math.factorial(len(rho))
                parts.append((theta_ids(part.theta), rho, rho_inv, full, part.theta))
            ids = None if lc is None else (tuple(q[0] for q in parts), isinstance(lc, tuple))
            self.edges[pe] = (color, ids, parts)
            for p in pe:
                self.incident[p].append(pe)

    def color_census(self):
        census: dict = {}
        for e, d in self.edges.items():
            key = (len(e), repr(d[0]), d[1])
            census[key] = census.get(key, 0) + 1
        return census


class _Search:
    """Backtracking over ``{x * f : x in G}`` for a chain ``G`` and a map ``f``."""

    def __init__(self, side1: _Side, side2: _Side, n: int, budget: int):
        self.s1, self.s2, self.n = side1, side2, n
        self.budget = budget
        self.nodes = 0
        self.fwd = [-1] * n
        self.bwd = [-1] * n

    def _edge_ok(self, e1, e2) -> bool:
        d1 = self.s1.edges[e1]
        d2 = self.s2.edges.get(e2)
        if d2 is None or d1[0] != d2[0] or d1[1] != d2[1]:
            return False
        fwd = self.fwd
        for q1, q2 in zip(d1[2], d2[2]):
            if q1[3]:
                continue
            # sigma(i) = rho2(phi(rho1^-1(i))) must lie in Theta
            rho1_inv, rho2 = q1[2], q2[1]
            sigma = tuple(rho2[fwd[x]] for x in rho1_inv)
            if not q1[4].contains(sigma):
                return False
        return True

    def push(self, a: int, c: int) -> bool:
        if self.bwd[c] != -1:
            return False
        self.fwd[a] = c
        self.bwd[c] = a
        fwd, bwd = self.fwd, self.bwd
        for e1 in self.s1.incident[a]:
            if all(fwd[x] != -1 for x in e1):
                if not self._edge_ok(e1, frozenset(fwd[x] for x in e1)):
                    return False
        for e2 in self.s2.incident[c]:
            if all(bwd[y] != -1 for y in e2):
                if frozenset(bwd[y] for y in e2) not in self.s1.edges:
                    return False
        return True

    def pop(self, a: int, c: int):
        self.fwd[a] = -1
        self.bwd[c] = -1

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")

    def find(self, chain: PermGroup, start: int, f: tuple):
        """First map ``x * f`` with ``x`` in level ``start`` of the chain that
        passes all checks; levels below ``start`` are assigned from ``f``."""
        base = chain.base
        done = []
        ok = True
        for j in range(start):
            b = base[j]
            c = f[b]
            self.tick()
            if not self.push(b, c):
                self.pop(b, c)
                ok = False
                break
            done.append((b, c))
        result = self._dfs(chain, start, f) if ok else None
        for b, c in reversed(done):
            self.pop(b, c)
        return result

    def _dfs(self, chain, j, f):
        base = chain.base
        if j == len(base):
            return f
        b = base[j]
        tr = chain.transversals[j]
        for p in sorted(tr, key=lambda q: f[q]):
            c = f[p]
            self.tick()
            if self.push(b, c):
                r = self._dfs(chain, j + 1, mul(tr[p], f))
                if r is not None:
                    self.pop(b, c)
                    return r
            self.pop(b, c)
        return None


def _search_order(hg: CosetLabeledHypergraph, pos: Mapping, group: PermGroup) -> list[int]:
    """Greedy base order: fixed points first, then by connection to the
    points already placed, then by orbit size and position."""
    n = len(pos)
    orbit_size = [0] * n
    for orb in group.orbits():
        for x in orb:
            orbit_size[x] = len(orb)
    nbrs: list[set] = [set() for _ in range(n)]
    for e in hg.labels:
        pe = [pos[x] for x in e]
        for x in pe:
            nbrs[x].update(pe)
    order, placed = [], [False] * n
    weight = [0] * n
    for _ in range(n):
        best = min(
            (x for x in range(n) if not placed[x]),
            key=lambda x: (orbit_size[x] > 1, -weight[x], orbit_size[x], x),
        )
        order.append(best)
        placed[best] = True
        for y in nbrs[best]:
            weight[y] += 1
    return order


def _automorphisms(search: _Search, chain: PermGroup) -> list:
    """Generators of the subgroup of ``chain`` preserving the structure."""
    gens: list = []
    for j in reversed(range(len(chain.base))):
        b = chain.base[j]
        tr = chain.transversals[j]
        if len(tr) == 1:
            continue
        orbit = _orbit(b, gens)
        for p in sorted(tr):
            if p in orbit:
                continue
            found = search.find(chain, j + 1, tr[p])
            if found is not None and not is_identity(found):
                gens.append(found)
                orbit = _orbit(b, gens)
    return gens


def _orbit(x, gens):
    seen = {x}
    queue = [x]
    for y in queue:
        for g in gens:
            z = g[y]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


@dataclass
class SearchStats:
    nodes: int = 0


def iso_coset_labeled(
    h1: CosetLabeledHypergraph,
    h2: CosetLabeledHypergraph,
    within: Coset | None = None,
    d: int | None = None,
    budget: int = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
) -> Coset:
    """All bijections in ``within`` that map hyperedges onto hyperedges with
    equal color and transported labeling coset."""
    if within is None:
        within = _full_coset(h1.vertices, h2.vertices)
    if d is not None and max(h1.max_edge_size(), h2.max_edge_size()) > d:
        raise ValueError(f"hyperedge larger than the bound d={d}")
    if within.empty or set(within.domain) != set(h1.vertices) or set(within.codomain) != set(h2.vertices):
        if not within.empty:
            raise ValueError("restricting coset must map V(h1) onto V(h2)")
        return Coset.empty_coset(h1.vertices, h2.vertices)
    n = len(within.domain)
    dpos, cpos = within.dpos, within.cpos
    ids = _ThetaIds()
    s1 = _Side(h1, dpos, ids)
    s2 = _Side(h2, cpos, ids)
    if len(s1.edges) != len(s2.edges) or s1.color_census() != s2.color_census():
        return Coset.empty_coset(within.domain, within.codomain)
    order = _search_order(h1, dpos, within.group)
    chain = within.group.with_base(order)
    search = _Search(s1, s2, n, budget)
    phi0 = search.find(chain, 0, within.rep)
    if stats is not None:
        stats.nodes += search.nodes
    if phi0 is None:
        return Coset.empty_coset(within.domain, within.codomain)
    auto = _Search(s1, _Side(h1, dpos, ids), n, budget - search.nodes)
    gens = _automorphisms(auto, chain)
    if stats is not None:
        stats.nodes += auto.nodes
    return Coset(within.domain, within.codomain, PermGroup(n, gens), phi0)


def iso_hypergraph(h1, h2, within: Coset | None = None, budget: int = DEFAULT_BUDGET) -> Coset:
    """Plain hypergraph isomorphism; inputs may be CosetLabeledHypergraph or
    ``(vertices, edges)`` pairs."""
    if not isinstance(h1, CosetLabeledHypergraph):
        h1 = CosetLabeledHypergraph(*h1)
    if not isinstance(h2, CosetLabeledHypergraph):
        h2 = CosetLabeledHypergraph(*h2)
    return iso_coset_labeled(h1, h2, within, budget=budget)


def _full_coset(v1, v2) -> Coset:
    v1, v2 = tuple(sorted(v1)), tuple(sorted(v2))
    if len(v1) != len(v2):
        return Coset.empty_coset(v1, v2)
    return Coset(v1, v2, PermGroup.symmetric_product([range(len(v1))], len(v1)), identity(len(v1)))


# --------------------------------------------------- multiple-labeling-cosets

def _lc_maps(lc1: LabelingCoset, lc2: LabelingCoset):
    """Coset of bijections ``phi`` with ``phi^-1 rho1 Theta = rho2 Theta``:
    ``phi = rho1 * theta * rho2^-1``."""
    r1 = [None] * len(lc1.domain)
    for x, l in lc1.rho.items():
        r1[l] = x
    r2_inv = {l: y for y, l in lc2.rho.items()}
    for th in lc1.theta.elements():
        yield {r1[l]: r2_inv[th[l]] for l in range(len(r1))}


def iso_multi_coset(x1: MultipleLabelingCoset, x2: MultipleLabelingCoset, budget: int = DEFAULT_BUDGET) -> Coset:
    """All bijections ``phi`` such that ``lambda -> phi^-1 lambda`` maps the
    colored cosets of ``x1`` onto those of ``x2``."""
    dom, cod = x1.vertices, x2.vertices
    empty = Coset.empty_coset(dom, cod)
    if len(dom) != len(cod) or len(x1.cosets) != len(x2.cosets):
        return empty
    census = lambda x: sorted((repr(c), lc.size) for lc, c in x.cosets)
    if census(x1) != census(x2):
        return empty
    if not x1.cosets:
        return _full_coset(dom, cod)
    target = {}
    for lc, c in x2.cosets:
        target.setdefault(lc.key(), []).append((lc, c))
    counts: dict = {}
    for _, c in x1.cosets:
        counts[repr(c)] = counts.get(repr(c), 0) + 1
    anchor_lc, anchor_c = min(x1.cosets, key=lambda e: (counts[repr(e[1])], e[0].size, repr(e[1])))
    nodes = 0
    found: list[dict] = []
    for lc2, c2 in x2.cosets:
        if c2 != anchor_c or not lc2.theta.equals(anchor_lc.theta):
            continue
        for phi in _lc_maps(anchor_lc, lc2):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes")
            if _multi_ok(x1, phi, target):
                found.append(phi)
    if not found:
        return empty
    phi0 = found[0]
    inv0 = {v: k for k, v in phi0.items()}
    gens = [{x: inv0[phi[x]] for x in dom} for phi in found[1:]]
    return Coset.from_map(phi0, gens)


def _multi_ok(x1, phi, target) -> bool:
    for lc, c in x1.cosets:
        moved = lc.transport(phi)
        for cand, c2 in target.get(moved.key(), ()):
            if c2 == c and cand == moved:
                break
        else:
            return False
    return True
