"""Brute-force reference implementations used to check the fast code paths.

Nothing here shares code with the refinement, closure or search modules.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Mapping

import numpy as np

from .graph import ColoredGraph
from .perm import Coset, PermGroup
from .refinement import TupleColoring


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_nodes: int = 5_000_000
    max_n: int = 12
    topo_max_n: int = 16

    def __post_init__(self):
        if min(self.max_nodes, self.max_n, self.topo_max_n) <= 0:
            raise ValueError("oracle budgets must be positive")


# ------------------------------------------------------------- isomorphism

def _bfs_order(g: ColoredGraph) -> list[int]:
    seen, order = set(), []
    for s in sorted(range(g.n), key=lambda v: (-g.degree(v), v)):
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(g.adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


class _Matcher:
    def __init__(self, g1: ColoredGraph, g2: ColoredGraph, budget: OracleBudget):
        self.g1, self.g2 = g1, g2
        self.budget = budget
        self.nodes = 0
        self.order = _bfs_order(g1)

    def _vertex_ok(self, v, w):
        g1, g2 = self.g1, self.g2
        return (
            g1.vertex_coloring[v] == g2.vertex_coloring[w]
            and g1.degree(v) == g2.degree(w)
            and g1.pair_color(v, v) == g2.pair_color(w, w)
        )

    def _pair_ok(self, u, v, x, w):
        g1, g2 = self.g1, self.g2
        if g1.has_edge(u, v) != g2.has_edge(x, w):
            return False
        return (
            g1.arc_color(u, v) == g2.arc_color(x, w)
            and g1.arc_color(v, u) == g2.arc_color(w, x)
            and g1.pair_color(u, v) == g2.pair_color(x, w)
            and g1.pair_color(v, u) == g2.pair_color(w, x)
        )

    def search(self, fixed: Mapping[int, int]) -> dict | None:
        phi = dict(fixed)
        used = set(phi.values())
        for u, x in phi.items():
            if not self._vertex_ok(u, x):
                return None
            for v, w in phi.items():
                if u < v and not self._pair_ok(u, v, x, w):
                    return None
        rest = [v for v in self.order if v not in phi]
        return self._dfs(rest, 0, phi, used)

    def _dfs(self, rest, i, phi, used):
        if i == len(rest):
            return dict(phi)
        v = rest[i]
        for w in range(self.g2.n):
            if w in used or not self._vertex_ok(v, w):
                continue
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                raise OracleCapExceeded("oracle node budget exceeded")
            if all(self._pair_ok(u, v, x, w) for u, x in phi.items()):
                phi[v] = w
                used.add(w)
                r = self._dfs(rest, i + 1, phi, used)
                if r is not None:
                    return r
                del phi[v]
                used.discard(w)
        return None


def _orbit(x, gens):
    seen, queue = {x}, [x]
    for y in queue:
        for g in gens:
            if g[y] not in seen:
                seen.add(g[y])
                queue.append(g[y])
    return seen


def brute_automorphisms(g: ColoredGraph, budget: OracleBudget = OracleBudget()) -> PermGroup:
    if g.n > budget.max_n:
        raise OracleCapExceeded(f"n={g.n} exceeds oracle cap {budget.max_n}")
    m = _Matcher(g, g, budget)
    order = m.order
    gens: list = []
    for j in reversed(range(g.n)):
        v = order[j]
        prefix = {order[i]: order[i] for i in range(j)}
        orbit = _orbit(v, gens)
        for w in range(g.n):
            if w in orbit or w in prefix.values():
                continue
            phi = m.search({**prefix, v: w})
            if phi is not None:
                gens.append(tuple(phi[x] for x in range(g.n)))
                orbit = _orbit(v, gens)
    return PermGroup(g.n, gens)


def brute_iso(g1: ColoredGraph, g2: ColoredGraph, budget: OracleBudget = OracleBudget()) -> Coset:
    """The exact set of color-preserving isomorphisms as a coset."""
    if max(g1.n, g2.n) > budget.max_n:
        raise OracleCapExceeded(f"n exceeds oracle cap {budget.max_n}")
    dom = tuple(range(g1.n))
    if g1.n != g2.n or g1.m != g2.m:
        return Coset.empty_coset(dom, tuple(range(g2.n)))
    phi = _Matcher(g1, g2, budget).search({})
    if phi is None:
        return Coset.empty_coset(dom, dom)
    aut = brute_automorphisms(g1, budget)
    return Coset(dom, dom, aut, tuple(phi[v] for v in dom))


# ----------------------------------------------------- topological minors

def has_topological_Kh(g: ColoredGraph, h: int, budget: OracleBudget = OracleBudget()) -> bool:
    """True iff some subdivision of K_h is a subgraph of ``g``."""
    if h > 5:
        raise OracleCapExceeded("topological subgraph oracle supports h <= 5")
    if g.n > budget.topo_max_n:
        raise OracleCapExceeded(f"n={g.n} exceeds topological oracle cap {budget.topo_max_n}")
    if h <= 1:
        return g.n >= h
    if h == 2:
        return g.m > 0
    nodes = [0]
    cand = [v for v in range(g.n) if g.degree(v) >= h - 1]
    for branch in combinations(cand, h):
        bset = set(branch)
        pairs = list(combinations(branch, 2))
        if _pack(g, pairs, 0, bset, set(), nodes, budget):
            return True
    return False


def _pack(g, pairs, i, branch, used, nodes, budget):
    if i == len(pairs):
        return True
    s, t = pairs[i]
    for internal in _paths(g, s, t, branch, used):
        nodes[0] += 1
        if nodes[0] > budget.max_nodes:
            raise OracleCapExceeded("topological oracle node budget exceeded")
        if _pack(g, pairs, i + 1, branch, used | internal, nodes, budget):
            return True
    return False


def _paths(g, s, t, branch, used):
    """Internal vertex sets of simple s-t paths avoiding branch and used vertices."""
    if t in g.adj[s]:
        yield frozenset()
    stack = [(s, [s])]
    blocked = branch | used
    while stack:
        u, path = stack.pop()
        for w in sorted(g.adj[u]):
            if w in blocked or w in path:
                continue
            if t in g.adj[w]:
                yield frozenset(path[1:] + [w])
            stack.append((w, path + [w]))


# -------------------------------------------------------- naive refinement

def _relabel(sig: dict) -> dict:
    ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
    return {k: ranks[s] for k, s in sig.items()}


def reference_refine(g: ColoredGraph, k: int, max_n: int | None = None) -> TupleColoring:
    """Textbook k-WL (k=1 is Color Refinement) using dictionaries."""
    cap = max_n if max_n is not None else (64 if k <= 2 else 24)
    if g.n > cap:
        raise OracleCapExceeded(f"n={g.n} exceeds reference cap {cap}")
    V = range(g.n)

    def arc(u, v):
        return g.arc_color(u, v) + 1 if g.has_edge(u, v) else 0

    def ptype(u, v):
        return (
            u == v, g.vertex_coloring[u], g.vertex_coloring[v], g.pair_color(u, u), g.pair_color(v, v),
            arc(u, v), arc(v, u), g.pair_color(u, v), g.pair_color(v, u),
        )

    if k == 1:
        col = _relabel({v: (g.vertex_coloring[v], g.pair_color(v, v)) for v in V})
        while True:
            sig = {
                v: (col[v], tuple(sorted((col[w], arc(v, w), arc(w, v)) for w in g.adj[v])))
                for v in V
            }
            new = _relabel(sig)
            if len(set(new.values())) == len(set(col.values())):
                break
            col = new
        arr = np.array([col[v] for v in V], dtype=np.int64)
        return TupleColoring(1, g.n, arr)
    if k == 2:
        col = _relabel({(u, v): ptype(u, v) for u in V for v in V})
        while True:
            sig = {
                (u, v): (col[(u, v)], tuple(sorted((col[(w, v)], col[(u, w)]) for w in V)))
                for u in V for v in V
            }
            new = _relabel(sig)
            if len(set(new.values())) == len(set(col.values())):
                break
            col = new
        arr = np.zeros((g.n, g.n), dtype=np.int64)
        for (u, v), c in col.items():
            arr[u, v] = c
        return TupleColoring(2, g.n, arr)
    if k == 3:
        col = _relabel({(a, b, c): (ptype(a, b), ptype(a, c), ptype(b, c)) for a in V for b in V for c in V})
        while True:
            sig = {
                (a, b, c): (
                    col[(a, b, c)],
                    tuple(sorted((col[(w, b, c)], col[(a, w, c)], col[(a, b, w)]) for w in V)),
                )
                for a in V for b in V for c in V
            }
            new = _relabel(sig)
            if len(set(new.values())) == len(set(col.values())):
                break
            col = new
        arr = np.zeros((g.n,) * 3, dtype=np.int64)
        for t, c in col.items():
            arr[t] = c
        return TupleColoring(3, g.n, arr)
    raise ValueError("k must be 1, 2 or 3")


# ------------------------------------------- definitional coset predicates

def _as_key(phi: Mapping) -> frozenset:
    return frozenset(phi.items())


def _moved(lc, phi):
    if lc is None:
        return None
    if isinstance(lc, tuple):
        return tuple(part.transport(phi) for part in lc)
    return lc.transport(phi)


def brute_coset_labeled(h1, h2, within: Coset) -> set:
    """Filter every element of ``within`` by the hyperedge condition."""
    out = set()
    if within.empty or len(h1.labels) != len(h2.labels):
        return out
    for phi in within.elements():
        ok = True
        for e1, (lc1, c1) in h1.labels.items():
            e2 = frozenset(phi[x] for x in e1)
            if e2 not in h2.labels:
                ok = False
                break
            lc2, c2 = h2.labels[e2]
            if c1 != c2:
                ok = False
                break
            if _moved(lc1, {x: phi[x] for x in e1}) != lc2:
                ok = False
                break
        if ok:
            out.add(_as_key(phi))
    return out


def brute_multi_coset(x1, x2) -> set:
    """Every bijection whose transport maps the colored cosets of ``x1`` onto ``x2``."""
    out = set()
    v1, v2 = list(x1.vertices), list(x2.vertices)
    if len(v1) != len(v2) or len(x1.cosets) != len(x2.cosets):
        return out
    for img in permutations(v2):
        phi = dict(zip(v1, img))
        remaining = list(x2.cosets)
        ok = True
        for lc, c in x1.cosets:
            moved = lc.transport(phi)
            for i, (lc2, c2) in enumerate(remaining):
                if c2 == c and lc2 == moved:
                    del remaining[i]
                    break
            else:
                ok = False
                break
        if ok:
            out.add(_as_key(phi))
    return out


def coset_as_set(c: Coset) -> set:
    return {_as_key(phi) for phi in c.elements()} if not c.empty else set()
