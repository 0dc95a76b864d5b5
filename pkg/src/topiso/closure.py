"""t-CR-stable colorings, t-closures, the closure graph and the initial-set finder."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
import numpy as np

from .graph import ColoredGraph, connected_components, is_connected, neighborhood
from .refinement import (
    TupleColoring,
    dense_ranks,
    initial_vertex_colors,
    project,
    refine_arcs,
    wl,
)


def t_of_h(h: int, a_deg: int = 2) -> int:
    """Default closure threshold ``144 * a_deg**2 * h**5``."""
    if h < 1 or a_deg < 1:
        raise ValueError("h and a_deg must be positive")
    return 144 * a_deg * a_deg * h ** 5


@dataclass(frozen=True)
class ClosureParams:
    h: int
    a_deg: int = 2
    override_t: int | None = None

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("h must be positive")
        if self.a_deg < 2:
            raise ValueError("a_deg must be at least 2")
        if self.override_t is not None and self.override_t < 1:
            raise ValueError("t must be at least 1")

    @property
    def t(self) -> int:
        return self.override_t if self.override_t is not None else t_of_h(self.h, self.a_deg)


# --------------------------------------------------------- t-CR procedure

def tcr_arcs(arcs: np.ndarray, colors: np.ndarray, t: int) -> tuple[np.ndarray, int]:
    """Alternate Color Refinement with splitting classes of size <= t.

    Returns the t-CR-stable coloring and the number of split steps.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    n = colors.shape[0]
    if n == 0:
        return colors.copy(), 0
    ids = np.arange(n, dtype=np.int64)
    splits = 0
    while True:
        colors, _ = refine_arcs(arcs, colors)
        sizes = np.bincount(colors)
        small = (sizes[colors] <= t) & (sizes[colors] > 1)
        if not small.any():
            return colors, splits
        flag = small.astype(np.int64)
        colors = dense_ranks(flag, np.where(small, ids, colors))
        splits += 1


def _individualized_start(base: np.ndarray, X: Iterable[int]) -> np.ndarray:
    n = base.shape[0]
    flag = np.zeros(n, dtype=np.int64)
    for v in X:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} out of range")
        flag[v] = 1
    ids = np.arange(n, dtype=np.int64)
    return dense_ranks(flag, np.where(flag > 0, ids, base))


def tcr_stable(g: ColoredGraph, t: int, individualized: Iterable[int] = ()) -> TupleColoring:
    """t-CR-stable coloring of ``g`` after individualizing the given vertices."""
    start = _individualized_start(initial_vertex_colors(g), individualized)
    colors, splits = tcr_arcs(g.arc_matrix(), start, t)
    return TupleColoring(1, g.n, colors, splits)


def _singletons(colors: np.ndarray) -> frozenset:
    if colors.size == 0:
        return frozenset()
    sizes = np.bincount(colors)
    return frozenset(np.flatnonzero(sizes[colors] == 1).tolist())


def closure_of(g: ColoredGraph, t: int, X: Iterable[int]) -> frozenset:
    return _singletons(tcr_stable(g, t, X).colors)


class PairClosure:
    """t-closures over a pair-colored graph, via the complete-graph encoding.

    Vertex colors are ``chi(v, v)``; the arc ``(v, w)`` carries
    ``(adjacent, chi(v, w))``.  Build once, query many sets.
    """

    def __init__(self, g: ColoredGraph, chi: np.ndarray, t: int):
        chi = np.asarray(chi, dtype=np.int64)
        if chi.shape != (g.n, g.n):
            raise ValueError("pair coloring must have shape (n, n)")
        self.g, self.t, self.n = g, t, g.n
        adj = g.adjacency_matrix().astype(np.int64)
        arcs = dense_ranks(adj, chi) + 1
        np.fill_diagonal(arcs, 0)
        self.arcs = arcs
        self.vertex_colors = dense_ranks(np.diag(chi).copy())

    def __call__(self, X: Iterable[int]) -> frozenset:
        start = _individualized_start(self.vertex_colors, X)
        colors, _ = tcr_arcs(self.arcs, start, self.t)
        return _singletons(colors)


def closure_pair(g: ColoredGraph, chi, t: int, X: Iterable[int]) -> frozenset:
    return PairClosure(g, chi, t)(X)


# ----------------------------------------------------------- closure graph

@dataclass
class ClosureGraph:
    n: int
    edges: frozenset
    scc: list
    maximal_flags: list

    def closure(self, v: int) -> frozenset:
        return frozenset([v] + [w for (u, w) in self.edges if u == v])


def closure_graph(g: ColoredGraph, chi, t: int) -> ClosureGraph:
    pc = PairClosure(g, chi, t)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    edges = set()
    for v in range(g.n):
        for w in pc({v}):
            if w != v:
                edges.add((v, w))
    dg.add_edges_from(edges)
    comps = [sorted(c) for c in nx.strongly_connected_components(dg)]
    comps.sort(key=lambda c: c[0])
    where = {v: i for i, c in enumerate(comps) for v in c}
    outgoing = [False] * len(comps)
    for u, w in edges:
        if where[u] != where[w]:
            outgoing[where[u]] = True
    flags = [not outgoing[where[v]] for v in range(g.n)]
    return ClosureGraph(g.n, frozenset(edges), comps, flags)


# ------------------------------------------------------------ initial set

@dataclass
class InitialSetResult:
    found: bool
    chi: np.ndarray | None = None
    X: frozenset = frozenset()
    c0: int | None = None
    tried: list = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return "Found" if self.found else "Detected"


def pair_coloring(g: ColoredGraph, wl_dim: int = 3) -> np.ndarray:
    """``chi(v, w) = WL3(v, w, w)``, or the stable 2-WL coloring with ``wl_dim=2``."""
    if wl_dim == 3:
        return project(wl(g, 3), 2).colors
    if wl_dim == 2:
        return wl(g, 2).colors
    raise ValueError("wl_dim must be 2 or 3")


def find_initial_set(
    g: ColoredGraph,
    params: ClosureParams,
    exhaustive: bool = False,
    wl_dim: int = 3,
    chi: np.ndarray | None = None,
) -> InitialSetResult:
    """Scan diagonal colors in ascending order for a class inside every
    member's closure; the first hit is returned, no hit means Detected.

    Without ``exhaustive`` one representative per color class is checked;
    closures are invariant within a class of a 2-stable coloring.
    """
    if not is_connected(g):
        raise ValueError("find_initial_set needs a connected graph")
    if chi is None:
        chi = pair_coloring(g, wl_dim)
    pc = PairClosure(g, chi, params.t)
    diag = np.diag(chi)
    tried = []
    for c in sorted(set(diag.tolist())):
        X = frozenset(np.flatnonzero(diag == c).tolist())
        reps = sorted(X) if exhaustive else [min(X)]
        ok = all(X <= pc({v}) for v in reps)
        tried.append((c, ok))
        if ok:
            return InitialSetResult(True, chi, X, c, tried)
    return InitialSetResult(False, chi, frozenset(), None, tried)


# ---------------------------------------------------------- separator check

@dataclass
class SeparatorReport:
    ok: bool
    violations: list
    boundaries: list


def check_separator_bound(g: ColoredGraph, D: Iterable[int], h: int) -> SeparatorReport:
    """Boundary sizes of all components of ``g - D``; flags sizes >= h."""
    D = set(D)
    bounds, bad = [], []
    for comp in connected_components(g, D):
        size = len(neighborhood(g, comp)[0])
        bounds.append((comp, size))
        if size >= h:
            bad.append((comp, size))
    return SeparatorReport(not bad, bad, bounds)
