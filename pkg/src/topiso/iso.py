"""Isomorphism of graphs that exclude a topological clique.

The recursion picks an isomorphism-invariant initial set, closes it under
t-CR, and splits the rest of the graph into components hanging off small
separators.  Components are solved recursively; their isomorphism cosets,
restricted to the separators, become labels of a coset-labeled hypergraph on
the closure, which is solved inside a coset bounding the closure's images.
Results are full isomorphism cosets ``Aut(G1) * phi``.
"""

from __future__ import annotations

import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .closure import ClosureParams, closure_of, find_initial_set
from .graph import (
    ColoredGraph,
    connected_components,
    is_connected,
    is_isomorphism,
    neighborhood,
    serialize_graph,
)
from .hypergraph import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CosetLabeledHypergraph,
    MultipleLabelingCoset,
    SearchStats,
    iso_coset_labeled,
    iso_multi_coset,
)
from .perm import Coset, LabelingCoset, PermGroup
from .refinement import refine_arcs

NON_ISOMORPHIC = "NonIsomorphic"
ISOMORPHIC = "Isomorphic"
DETECTED = "TopologicalSubgraphDetected"


class TopologicalSubgraphDetected(Exception):
    """Raised where no answer but a witness of a large topological clique exists."""

    def __init__(self, side: int = 1):
        super().__init__(f"topological clique minor detected in input {side}")
        self.side = side


@dataclass
class IsoStats:
    timings: dict = field(default_factory=dict)
    nodes: int = 0
    calls: int = 0
    max_depth: int = 0
    peak_classes: int = 0

    def as_dict(self) -> dict:
        return {
            "timings": {k: round(v, 6) for k, v in sorted(self.timings.items())},
            "search_nodes": self.nodes,
            "recursive_calls": self.calls,
            "max_depth": self.max_depth,
            "peak_classes": self.peak_classes,
        }


@dataclass
class IsoResult:
    outcome: str
    coset: Coset | None = None
    side: int | None = None
    stats: IsoStats = field(default_factory=IsoStats)

    @property
    def isomorphic(self) -> bool:
        return self.outcome == ISOMORPHIC

    def representative(self) -> tuple | None:
        if self.coset is None or self.coset.empty:
            return None
        rep = self.coset.representative()
        return tuple(rep[v] for v in range(len(rep)))


# ------------------------------------------------------------ data records

@dataclass
class _Level:
    g: ColoredGraph  # recolored by the closure loop
    X: frozenset
    D: frozenset
    comps: list
    seps: list
    trace: tuple


@dataclass(eq=False)
class _Comp:
    side: int
    Z: frozenset
    S: frozenset
    H: ColoredGraph
    old: list
    S_local: frozenset
    key: tuple
    cls: int = -1
    full: Coset | None = None
    lc: LabelingCoset | None = None


@dataclass(eq=False)
class _Part:
    S: frozenset
    comps: list
    multi: MultipleLabelingCoset | None = None
    key: tuple = ()
    cls: int = -1
    lc: LabelingCoset | None = None


def _invariant(g: ColoredGraph) -> tuple:
    return (
        g.n,
        g.m,
        tuple(sorted(g.vertex_coloring)),
        tuple(sorted(g.degrees())),
        tuple(sorted(g.arc_coloring.values())),
    )


def _labels(S) -> dict:
    return {x: i for i, x in enumerate(sorted(S))}


def _relabel(c: Coset, dom: list, cod: list) -> Coset:
    if c.empty:
        return Coset.empty_coset(dom, cod)
    return Coset(tuple(dom), tuple(cod), c.group, c.rep)


def _compose(a: Coset, b: Coset) -> Coset:
    """``a`` followed by ``b`` when ``a`` is an isomorphism coset ``Aut * phi``."""
    ra, rb = a.representative(), b.representative()
    rep = tuple(b.cpos[rb[ra[x]]] for x in a.domain)
    return Coset(a.domain, b.codomain, a.group, rep)


def _as_perm(mapping: dict, n: int) -> tuple:
    return tuple(mapping[v] for v in range(n))


# ------------------------------------------------------------------ engine

class _Engine:
    def __init__(self, params: ClosureParams, budget: int, exhaustive: bool, memo: bool):
        self.params = params
        self.budget = budget
        self.exhaustive = exhaustive
        self.stats = IsoStats()
        self.search = SearchStats()
        self.memo = {} if memo else None
        self.depth = 0

    @contextmanager
    def _timed(self, phase):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.stats.timings[phase] = self.stats.timings.get(phase, 0.0) + time.perf_counter() - t0

    def _remaining(self) -> int:
        left = self.budget - self.search.nodes
        if left <= 0:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")
        return left

    def _peak(self, classes):
        self.stats.peak_classes = max(self.stats.peak_classes, int(classes))

    # -- one level of the recursion on a single graph ---------------------
    def _initial(self, g):
        with self._timed("initial_set"):
            res = find_initial_set(g, self.params, exhaustive=self.exhaustive)
        self._peak(np.unique(res.chi).size)
        return res if res.found else None

    def _closure(self, g, X):
        with self._timed("closure"):
            return closure_of(g, self.params.t, X)

    def level(self, g: ColoredGraph, S: frozenset) -> _Level | None:
        """Initial set, closure and components; None when Detected."""
        h = self.params.h
        res = self._initial(g)
        if res is None:
            return None
        Xs = [res.X]
        trace = [(res.c0, len(res.X))]
        D = self._closure(g, res.X)
        if not S <= D:
            D = self._closure(g, res.X | S)
            trace.append("S")
        comps = connected_components(g, D)
        while len(comps) == 1 and (len(D) < h or D == neighborhood(g, comps[0])[0]):
            g = g.with_vertex_coloring([2 * c + (v in D) for v, c in enumerate(g.vertex_coloring)])
            sub, old = g.induced(comps[0])
            res = self._initial(sub)
            if res is None:
                return None
            X = frozenset(old[x] for x in res.X)
            D1 = self._closure(g, X)
            if not D <= D1:
                D1 = self._closure(g, X | D)
                trace.append("D")
            D = D1
            comps = connected_components(g, D)
            Xs.append(X)
            trace.append((res.c0, len(X), len(D)))
        trace.append((len(D), len(comps)))
        seps = [neighborhood(g, Z)[0] for Z in comps]
        X = min(Xs, key=len)
        return _Level(g, X, frozenset(D), [frozenset(Z) for Z in comps], seps, tuple(trace))

    # -- recursion ----------------------------------------------------------
    def top(self, g1: ColoredGraph, g2: ColoredGraph) -> Coset:
        empty = Coset.empty_coset(range(g1.n), range(g2.n))
        if _invariant(g1) != _invariant(g2):
            return empty
        c1, c2 = is_connected(g1), is_connected(g2)
        if c1 != c2:
            return empty
        if c1:
            return self.rec(g1, frozenset(), g2, frozenset())
        return self._disconnected(g1, g2)

    def rec(self, g1, S1, g2, S2) -> Coset:
        key = None
        if self.memo is not None:
            key = (serialize_graph(g1), S1, serialize_graph(g2), S2)
            if key in self.memo:
                return self.memo[key]
        self.stats.calls += 1
        self.depth += 1
        self.stats.max_depth = max(self.stats.max_depth, self.depth)
        try:
            out = self._rec(g1, S1, g2, S2)
        finally:
            self.depth -= 1
        if key is not None:
            self.memo[key] = out
        return out

    def _rec(self, g1, S1, g2, S2) -> Coset:
        empty = Coset.empty_coset(range(g1.n), range(g2.n))
        if _invariant(g1) != _invariant(g2):
            return empty
        if g1.n < self.params.h:
            return self._small(g1, g2)
        L1, L2 = self.level(g1, S1), self.level(g2, S2)
        if L1 is None and L2 is None:
            raise TopologicalSubgraphDetected(1)
        if L1 is None or L2 is None or L1.trace != L2.trace:
            return empty
        if not L1.comps and len(L1.D) < self.params.h:
            return self._small(L1.g, L2.g)
        return self._split(g1, g2, L1, L2)

    def _child(self, a: _Comp, b: _Comp) -> Coset:
        try:
            c = self.rec(a.H, a.S_local, b.H, b.S_local)
        except TopologicalSubgraphDetected as d:
            raise TopologicalSubgraphDetected(a.side if d.side == 1 else b.side) from None
        return _relabel(c, a.old, b.old)

    def _classify(self, comps1, comps2) -> list | None:
        """Sort components into isomorphism classes and return the class
        representatives; None if the two sides cannot match."""
        reps: list[_Comp] = []
        for comp in comps1 + comps2:
            for i, rep in enumerate(reps):
                if rep.key != comp.key:
                    continue
                c = self._child(comp, rep)
                if c:
                    comp.cls, comp.full = i, c
                    break
            else:
                if comp.side == 2:
                    return None
                comp.cls = len(reps)
                reps.append(comp)
                comp.full = self._child(comp, comp)
        if Counter(c.cls for c in comps1) != Counter(c.cls for c in comps2):
            return None
        return reps

    def _comp_iso(self, a: _Comp, b: _Comp) -> Coset:
        return _compose(a.full, b.full.inverse())

    # -- base case ----------------------------------------------------------
    def _joint_cr(self, g1, g2, extra1, extra2):
        n1, n2 = g1.n, g2.n
        keys = [(g1.vertex_coloring[v], extra1[v]) for v in range(n1)]
        keys += [(g2.vertex_coloring[v], extra2[v]) for v in range(n2)]
        ranks = {k: i for i, k in enumerate(sorted(set(keys)))}
        colors = np.array([ranks[k] for k in keys], dtype=np.int64)
        arcs = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
        arcs[:n1, :n1] = g1.arc_matrix()
        arcs[n1:, n1:] = g2.arc_matrix()
        with self._timed("refinement"):
            colors, _ = refine_arcs(arcs, colors)
        self._peak(np.unique(colors).size)
        return colors[:n1].tolist(), colors[n1:].tolist()

    def _small(self, g1, g2) -> Coset:
        """Brute-force search on all vertices within the joint CR classes."""
        V1, V2 = range(g1.n), range(g2.n)
        c1, c2 = self._joint_cr(g1, g2, [0] * g1.n, [0] * g2.n)
        within = Coset.young(V1, V2, dict(enumerate(c1)), dict(enumerate(c2)))
        if within.empty:
            return Coset.empty_coset(V1, V2)
        h1 = CosetLabeledHypergraph(V1, _finish(_structure(g1, V1)))
        h2 = CosetLabeledHypergraph(V2, _finish(_structure(g2, V2)))
        with self._timed("search"):
            return iso_coset_labeled(h1, h2, within, budget=self._remaining(), stats=self.search)

    # -- general case -------------------------------------------------------
    def _components(self, side, L: _Level) -> list[_Comp]:
        out = []
        for Z, S in zip(L.comps, L.seps):
            H, old = L.g.induced(Z | S)
            H = H.with_vertex_coloring([2 * c + (old[i] in Z) for i, c in enumerate(H.vertex_coloring)])
            S_local = frozenset(i for i, v in enumerate(old) if v in S)
            out.append(_Comp(side, Z, S, H, old, S_local, (_invariant(H), len(S))))
        return out

    def _parts(self, comps) -> dict:
        by_sep: dict = {}
        for c in comps:
            by_sep.setdefault(c.S, []).append(c)
        parts = {}
        for S, cs in by_sep.items():
            multi = MultipleLabelingCoset(S, [(c.lc, c.cls) for c in cs])
            key = (len(S), tuple(sorted(c.cls for c in cs)))
            parts[S] = _Part(S, cs, multi, key)
        return parts

    def _split(self, g1, g2, L1: _Level, L2: _Level) -> Coset:
        n1, n2 = g1.n, g2.n
        empty = Coset.empty_coset(range(n1), range(n2))
        comps1, comps2 = self._components(1, L1), self._components(2, L2)
        reps = self._classify(comps1, comps2)
        if reps is None:
            return empty
        with self._timed("groups"):
            for c in comps1 + comps2:
                c.lc = LabelingCoset.from_coset(c.full.restrict(c.S), _labels(reps[c.cls].S))
        parts1, parts2 = self._parts(comps1), self._parts(comps2)
        preps: list[_Part] = []
        with self._timed("search"):
            for side, P in [(1, p) for p in parts1.values()] + [(2, p) for p in parts2.values()]:
                for i, R in enumerate(preps):
                    if R.key != P.key:
                        continue
                    phi = iso_multi_coset(P.multi, R.multi, budget=self._remaining())
                    if phi:
                        P.cls, P.phi = i, phi
                        break
                else:
                    if side == 2:
                        return empty
                    P.cls = len(preps)
                    preps.append(P)
                    P.phi = iso_multi_coset(P.multi, P.multi, budget=self._remaining())
                P.lc = LabelingCoset.from_coset(P.phi, _labels(preps[P.cls].S))
        h1 = self._hypergraph(L1, parts1)
        h2 = self._hypergraph(L2, parts2)
        joined = self._union(L1, L2, h1, h2)
        if joined is None:
            return empty
        with self._timed("groups"):
            rep = self._extend(joined.representative(), parts1, parts2)
            gens = [self._extend(a, parts1, parts1) for a in joined.automorphism_maps()]
            gens += self._fixing(comps1, parts1, n1)
            perms = [_as_perm(m, n1) for m in gens]
            rep = _as_perm(rep, n1)
        if not is_isomorphism(g1, g2, rep) or not all(is_isomorphism(g1, g1, p) for p in perms):
            raise RuntimeError("extension produced a map that is not an isomorphism")
        return Coset(range(n1), range(n2), PermGroup(n1, perms), rep)

    def _hypergraph(self, L: _Level, parts: dict) -> CosetLabeledHypergraph:
        labels = _structure(L.g, L.D)
        for S, P in parts.items():
            labels.setdefault(frozenset(S), []).append((P.lc, ("sep", P.cls)))
        return CosetLabeledHypergraph(L.D, _finish(labels))

    def _union(self, L1, L2, h1, h2) -> Coset | None:
        """Join of the hypergraph isomorphisms over all images of one vertex."""
        v1 = min(L1.X)
        joined = None
        image: set = set()
        for v2 in sorted(L2.X):
            if v2 in image:
                continue
            e1 = [(v in L1.D, v == v1) for v in range(L1.g.n)]
            e2 = [(v in L2.D, v == v2) for v in range(L2.g.n)]
            c1, c2 = self._joint_cr(L1.g, L2.g, e1, e2)
            D1, D2 = sorted(L1.D), sorted(L2.D)
            within = Coset.young(D1, D2, {v: c1[v] for v in D1}, {v: c2[v] for v in D2})
            if within.empty:
                continue
            with self._timed("search"):
                J = iso_coset_labeled(h1, h2, within, budget=self._remaining(), stats=self.search)
            if J.empty:
                continue
            joined = J if joined is None else Coset.join([joined, J])
            p = joined.dpos[v1]
            image = {joined.codomain[joined.rep[i]] for i in joined.group.orbit(p)}
        return joined

    def _extend(self, phi_D: dict, parts_a: dict, parts_b: dict) -> dict:
        """Extend a map on the closure to all vertices, component by component."""
        full = dict(phi_D)
        for S, P in parts_a.items():
            Q = parts_b[frozenset(phi_D[x] for x in S)]
            phi_S = {x: phi_D[x] for x in S}
            used = set()
            for a in P.comps:
                moved = a.lc.transport(phi_S)
                for i, b in enumerate(Q.comps):
                    if i in used or b.cls != a.cls or b.lc != moved:
                        continue
                    psi = self._comp_iso(a, b).element_with(phi_S)
                    if psi is None:
                        continue
                    used.add(i)
                    full.update({x: psi[x] for x in a.Z})
                    break
                else:
                    raise RuntimeError("no component extends the closure map")
        return full

    def _fixing(self, comps, parts, n) -> list[dict]:
        """Generators of the automorphisms fixing the closure pointwise."""
        gens = []
        for a in comps:
            grp = a.full.group
            stab = grp.pointwise_stabilizer(a.full.dpos[x] for x in a.S)
            for g in stab.generators:
                m = {v: v for v in range(n)}
                m.update({a.full.domain[i]: a.full.domain[g[i]] for i in range(len(g))})
                gens.append(m)
        for P in parts.values():
            blocks: list[list[_Comp]] = []
            for c in P.comps:
                for blk in blocks:
                    if blk[0].cls == c.cls and blk[0].lc == c.lc:
                        blk.append(c)
                        break
                else:
                    blocks.append([c])
            for blk in blocks:
                for a, b in zip(blk, blk[1:]):
                    psi = self._comp_iso(a, b).element_with({x: x for x in a.S})
                    m = {v: v for v in range(n)}
                    for x in a.Z:
                        m[x] = psi[x]
                        m[psi[x]] = x
                    gens.append(m)
        return gens

    def _disconnected(self, g1, g2) -> Coset:
        n1, n2 = g1.n, g2.n
        empty = Coset.empty_coset(range(n1), range(n2))
        comps = {}
        for side, g in ((1, g1), (2, g2)):
            cs = []
            for Z in connected_components(g):
                H, old = g.induced(Z)
                cs.append(_Comp(side, frozenset(Z), frozenset(), H, old, frozenset(), (_invariant(H),)))
            comps[side] = cs
        if self._classify(comps[1], comps[2]) is None:
            return empty
        with self._timed("groups"):
            rep: dict = {}
            pool = {}
            for b in comps[2]:
                pool.setdefault(b.cls, []).append(b)
            for a in comps[1]:
                b = pool[a.cls].pop(0)
                rep.update(self._comp_iso(a, b).representative())
            gens = []
            for a in comps[1]:
                for g in a.full.group.generators:
                    m = {v: v for v in range(n1)}
                    m.update({a.full.domain[i]: a.full.domain[g[i]] for i in range(len(g))})
                    gens.append(m)
            by_cls: dict = {}
            for a in comps[1]:
                by_cls.setdefault(a.cls, []).append(a)
            for blk in by_cls.values():
                for a, b in zip(blk, blk[1:]):
                    psi = self._comp_iso(a, b).representative()
                    m = {v: v for v in range(n1)}
                    for x in a.Z:
                        m[x] = psi[x]
                        m[psi[x]] = x
                    gens.append(m)
            perms = [_as_perm(m, n1) for m in gens]
            rep = _as_perm(rep, n1)
        if not is_isomorphism(g1, g2, rep):
            raise RuntimeError("component matching produced a non-isomorphism")
        return Coset(range(n1), range(n2), PermGroup(n1, perms), rep)


# ------------------------------------------------------- hypergraph labels

def _structure(g: ColoredGraph, U) -> dict:
    """Singleton and edge labels of ``g[U]`` as lists of ``(coset, color)`` parts."""
    U = set(U)
    labels: dict = {}
    for v in sorted(U):
        labels[frozenset([v])] = [(None, ("vertex", g.vertex_coloring[v]))]
    for u, v in g.edges:
        if u not in U or v not in U:
            continue
        a, b = g.arc_color(u, v), g.arc_color(v, u)
        if a == b:
            labels[frozenset((u, v))] = [(None, ("edge", a, a))]
        else:
            lo, hi = (u, v) if a < b else (v, u)
            lc = LabelingCoset((u, v), {lo: 0, hi: 1})
            labels[frozenset((u, v))] = [(lc, ("edge", min(a, b), max(a, b)))]
    return labels


def _finish(labels: dict) -> dict:
    out = {}
    for e, parts in labels.items():
        if len(parts) == 1:
            out[e] = parts[0]
        else:
            lcs = tuple(lc for lc, _ in parts if lc is not None)
            out[e] = (lcs or None, tuple(c for _, c in parts))
    return out


# -------------------------------------------------------------- public API

def _check_input(g: ColoredGraph):
    if g.pair_coloring:
        raise ValueError("pair colorings are not supported by the isomorphism engine")


def isomorphisms(
    g1: ColoredGraph,
    g2: ColoredGraph,
    params: ClosureParams,
    budget: int = DEFAULT_BUDGET,
    exhaustive: bool = False,
    memo: bool = False,
) -> IsoResult:
    """All isomorphisms ``g1 -> g2`` as a coset, or a detection outcome."""
    _check_input(g1)
    _check_input(g2)
    eng = _Engine(params, budget, exhaustive, memo)
    t0 = time.perf_counter()
    try:
        coset = eng.top(g1, g2)
    except TopologicalSubgraphDetected as d:
        outcome, coset, side = DETECTED, None, d.side
    else:
        outcome, side = (NON_ISOMORPHIC if coset.empty else ISOMORPHIC), None
    eng.stats.nodes = eng.search.nodes
    eng.stats.timings["total"] = time.perf_counter() - t0
    return IsoResult(outcome, coset, side, eng.stats)


def recurse(
    g1: ColoredGraph,
    g2: ColoredGraph,
    c0: int,
    params: ClosureParams,
    budget: int = DEFAULT_BUDGET,
) -> Coset:
    """Isomorphisms ``g1 -> g2`` restricted to the vertices of color ``c0``.

    With no vertex of that color the result is the coset holding only the
    empty map, or the empty coset when the graphs are not isomorphic.
    """
    _check_input(g1)
    _check_input(g2)
    S1 = frozenset(v for v in range(g1.n) if g1.vertex_coloring[v] == c0)
    S2 = frozenset(v for v in range(g2.n) if g2.vertex_coloring[v] == c0)
    eng = _Engine(params, budget, False, False)
    if len(S1) != len(S2):
        return Coset.empty_coset(sorted(S1), sorted(S2))
    if is_connected(g1) and is_connected(g2) and g1.n > 0:
        full = eng.rec(g1, S1, g2, S2)
    else:
        full = eng.top(g1, g2)
    return full.restrict(S1)


def automorphism_group(g: ColoredGraph, params: ClosureParams, budget: int = DEFAULT_BUDGET) -> PermGroup:
    res = isomorphisms(g, g, params, budget)
    if res.outcome == DETECTED:
        raise TopologicalSubgraphDetected(1)
    return res.coset.group


def bounding_coset(g1: ColoredGraph, v1: int, D1, g2: ColoredGraph, v2: int, D2) -> Coset:
    """Color-preserving bijections ``D1 -> D2`` after joint Color Refinement
    with ``v1``, ``v2`` individualized and the closures marked."""
    eng = _Engine(ClosureParams(1), DEFAULT_BUDGET, False, False)
    D1, D2 = frozenset(D1), frozenset(D2)
    e1 = [(v in D1, v == v1) for v in range(g1.n)]
    e2 = [(v in D2, v == v2) for v in range(g2.n)]
    c1, c2 = eng._joint_cr(g1, g2, e1, e2)
    return Coset.young(sorted(D1), sorted(D2), {v: c1[v] for v in D1}, {v: c2[v] for v in D2})


# ------------------------------------------------------ tree decomposition

@dataclass
class DecompositionNode:
    bag: frozenset
    boundary: frozenset = frozenset()
    children: list = field(default_factory=list)

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def to_dict(self) -> dict:
        return {
            "bag": sorted(self.bag),
            "boundary": sorted(self.boundary),
            "children": [c.to_dict() for c in self.children],
        }


def tree_decomposition(g: ColoredGraph, params: ClosureParams, exhaustive: bool = False) -> DecompositionNode:
    """Decomposition read off the recursion: bags are closures, adhesion sets
    are separators.  Raises TopologicalSubgraphDetected when the recursion
    cannot proceed."""
    _check_input(g)
    eng = _Engine(params, DEFAULT_BUDGET, exhaustive, False)
    if is_connected(g):
        return _decompose(eng, g, frozenset(), list(range(g.n)))
    root = DecompositionNode(frozenset())
    for Z in connected_components(g):
        H, old = g.induced(Z)
        root.children.append(_decompose(eng, H, frozenset(), old))
    return root


def _decompose(eng: _Engine, g, S, old) -> DecompositionNode:
    glob = lambda vs: frozenset(old[v] for v in vs)
    if g.n < eng.params.h:
        return DecompositionNode(glob(range(g.n)), glob(S))
    L = eng.level(g, S)
    if L is None:
        raise TopologicalSubgraphDetected(1)
    node = DecompositionNode(glob(L.D), glob(S))
    for c in eng._components(1, L):
        node.children.append(_decompose(eng, c.H, c.S_local, [old[v] for v in c.old]))
    return node


def check_decomposition(g: ColoredGraph, root: DecompositionNode, h: int | None = None) -> dict:
    """Covering, connectivity and adhesion of a rooted decomposition."""
    parent: dict = {}
    nodes = list(root.nodes())
    for nd in nodes:
        for c in nd.children:
            parent[id(c)] = nd
    covered = set().union(*(nd.bag for nd in nodes)) if nodes else set()
    vertices_ok = covered == set(range(g.n))
    edges_ok = all(any(u in nd.bag and v in nd.bag for nd in nodes) for u, v in g.edges)
    # the nodes holding v form a subtree iff exactly one of them has no parent holding v
    connected_ok = True
    for v in range(g.n):
        tops = [nd for nd in nodes if v in nd.bag and (id(nd) not in parent or v not in parent[id(nd)].bag)]
        if len(tops) != 1:
            connected_ok = False
    adhesions = [len(nd.bag & parent[id(nd)].bag) for nd in nodes if id(nd) in parent]
    max_adh = max(adhesions, default=0)
    report = {
        "vertices_covered": vertices_ok,
        "edges_covered": edges_ok,
        "connected": connected_ok,
        "max_adhesion": max_adh,
        "width": max((len(nd.bag) for nd in nodes), default=0) - 1,
        "nodes": len(nodes),
    }
    report["adhesion_ok"] = h is None or max_adh < h
    report["ok"] = vertices_ok and edges_ok and connected_ok and report["adhesion_ok"]
    return report
