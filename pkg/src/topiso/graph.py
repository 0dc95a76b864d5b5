"""Colored graphs, the text file format, and basic structural operations."""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised for malformed graph files; ``line`` is 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    """Undirected simple graph on vertices ``0..n-1`` with optional colorings.

    Unset colors default to 0.  Arc and pair colorings are stored sparsely:
    entries equal to 0 are dropped so that equality is representation-free.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    vertex_coloring: tuple = ()
    arc_coloring: Mapping = field(default_factory=dict)
    pair_coloring: Mapping = field(default_factory=dict)

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        object.__setattr__(self, "n", n)
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            edges.add(_norm_edge(u, v))
        object.__setattr__(self, "edges", frozenset(edges))
        vc = tuple(int(c) for c in self.vertex_coloring) if self.vertex_coloring else (0,) * n
        if len(vc) != n:
            raise ValueError("vertex coloring length does not match n")
        if any(c < 0 for c in vc):
            raise ValueError("colors must be non-negative")
        object.__setattr__(self, "vertex_coloring", vc)
        arcs = {}
        for (u, v), c in dict(self.arc_coloring or {}).items():
            u, v, c = int(u), int(v), int(c)
            if _norm_edge(u, v) not in edges or u == v:
                raise ValueError(f"arc color on non-edge ({u}, {v})")
            if c < 0:
                raise ValueError("colors must be non-negative")
            if c:
                arcs[(u, v)] = c
        object.__setattr__(self, "arc_coloring", arcs)
        pairs = {}
        for (u, v), c in dict(self.pair_coloring or {}).items():
            u, v, c = int(u), int(v), int(c)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"pair ({u}, {v}) out of range")
            if c < 0:
                raise ValueError("colors must be non-negative")
            if c:
                pairs[(u, v)] = c
        object.__setattr__(self, "pair_coloring", pairs)

    # -- views ------------------------------------------------------------
    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def arc_color(self, u: int, v: int) -> int:
        return self.arc_coloring.get((u, v), 0)

    def pair_color(self, u: int, v: int) -> int:
        return self.pair_coloring.get((u, v), 0)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        return a

    def arc_matrix(self) -> np.ndarray:
        """Dense arc code matrix: 0 for non-edges, ``arc color + 1`` on edges."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = self.arc_color(u, v) + 1
            a[v, u] = self.arc_color(v, u) + 1
        return a

    def pair_matrix(self) -> np.ndarray:
        p = np.zeros((self.n, self.n), dtype=np.int64)
        for (u, v), c in self.pair_coloring.items():
            p[u, v] = c
        return p

    @property
    def is_vertex_colored_only(self) -> bool:
        return not self.arc_coloring and not self.pair_coloring

    # -- derived graphs ---------------------------------------------------
    def with_vertex_coloring(self, coloring: Sequence[int]) -> "ColoredGraph":
        return ColoredGraph(self.n, self.edges, tuple(coloring), self.arc_coloring, self.pair_coloring)

    def induced(self, vertices: Iterable[int]) -> tuple["ColoredGraph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; returns it with the old ids."""
        old = sorted(set(vertices))
        new = {v: i for i, v in enumerate(old)}
        edges = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        arcs = {(new[u], new[v]): c for (u, v), c in self.arc_coloring.items() if u in new and v in new}
        pairs = {(new[u], new[v]): c for (u, v), c in self.pair_coloring.items() if u in new and v in new}
        vc = tuple(self.vertex_coloring[v] for v in old)
        return ColoredGraph(len(old), edges, vc, arcs, pairs), old

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.vertex_coloring == other.vertex_coloring
            and self.arc_coloring == other.arc_coloring
            and self.pair_coloring == other.pair_coloring
        )

    def __hash__(self):
        return hash((self.n, self.edges, self.vertex_coloring))

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, m={self.m})"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in sorted(self.edges)],
            "vcolor": {str(v): c for v, c in enumerate(self.vertex_coloring) if c},
            "acolor": [[u, v, c] for (u, v), c in sorted(self.arc_coloring.items())],
            "pcolor": [[u, v, c] for (u, v), c in sorted(self.pair_coloring.items())],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ColoredGraph":
        n = int(d["n"])
        vc = [0] * n
        for v, c in d.get("vcolor", {}).items():
            vc[int(v)] = int(c)
        arcs = {(u, v): c for u, v, c in d.get("acolor", [])}
        pairs = {(u, v): c for u, v, c in d.get("pcolor", [])}
        return cls(n, [tuple(e) for e in d.get("edges", [])], tuple(vc), arcs, pairs)


# ---------------------------------------------------------------- file I/O

def parse_graph(text: bytes | str) -> ColoredGraph:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphFormatError(f"not UTF-8: {exc}") from None
    n = None
    edges: dict[Edge, int] = {}
    vcolor: dict[int, int] = {}
    arcs: dict[Edge, tuple[int, int]] = {}
    pairs: dict[Edge, int] = {}

    def ints(parts, count, lineno):
        if len(parts) != count:
            raise GraphFormatError(f"expected {count} integers after '{parts_kw}'", lineno)
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"non-integer token in {' '.join(parts)!r}", lineno) from None
        return vals

    def vertex(v, lineno):
        if not 0 <= v < n:
            raise GraphFormatError(f"vertex {v} out of range 0..{n - 1}", lineno)
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts_kw, *parts = line.split()
        if parts_kw == "n":
            if n is not None:
                raise GraphFormatError("duplicate 'n' header", lineno)
            (n,) = ints(parts, 1, lineno)
            if n < 0:
                raise GraphFormatError("negative vertex count", lineno)
            continue
        if n is None:
            raise GraphFormatError("'n <count>' header must come first", lineno)
        if parts_kw == "e":
            u, v = (vertex(x, lineno) for x in ints(parts, 2, lineno))
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}", lineno)
            key = _norm_edge(u, v)
            if key in edges:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            edges[key] = lineno
        elif parts_kw == "vcolor":
            v, c = ints(parts, 2, lineno)
            vertex(v, lineno)
            if c < 0:
                raise GraphFormatError("negative color", lineno)
            if v in vcolor:
                raise GraphFormatError(f"duplicate vcolor for {v}", lineno)
            vcolor[v] = c
        elif parts_kw in ("acolor", "pcolor"):
            u, v, c = ints(parts, 3, lineno)
            vertex(u, lineno)
            vertex(v, lineno)
            if c < 0:
                raise GraphFormatError("negative color", lineno)
            target = arcs if parts_kw == "acolor" else pairs
            if (u, v) in target:
                raise GraphFormatError(f"duplicate {parts_kw} for ({u}, {v})", lineno)
            target[(u, v)] = (c, lineno) if parts_kw == "acolor" else c
        else:
            raise GraphFormatError(f"unknown record {parts_kw!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'n <count>' header")
    for (u, v), (_, lineno) in arcs.items():
        if _norm_edge(u, v) not in edges:
            raise GraphFormatError(f"acolor on non-edge ({u}, {v})", lineno)
    vc = tuple(vcolor.get(v, 0) for v in range(n))
    return ColoredGraph(n, edges.keys(), vc, {k: c for k, (c, _) in arcs.items()}, pairs)


def serialize_graph(g: ColoredGraph) -> bytes:
    lines = [f"n {g.n}"]
    lines += [f"e {u} {v}" for u, v in sorted(g.edges)]
    lines += [f"vcolor {v} {c}" for v, c in enumerate(g.vertex_coloring) if c]
    lines += [f"acolor {u} {v} {c}" for (u, v), c in sorted(g.arc_coloring.items())]
    lines += [f"pcolor {u} {v} {c}" for (u, v), c in sorted(g.pair_coloring.items())]
    return ("\n".join(lines) + "\n").encode("utf-8")


def read_graph(path) -> ColoredGraph:
    with open(path, "rb") as fh:
        return parse_graph(fh.read())


def write_graph(g: ColoredGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_graph(g))


def graph_to_json(g: ColoredGraph) -> str:
    return json.dumps(g.to_dict(), sort_keys=True)


# ------------------------------------------------------------- permutations

def apply_permutation(g: ColoredGraph, p: Sequence[int]) -> ColoredGraph:
    """The image graph ``g^p``: vertex ``v`` becomes ``p[v]``."""
    p = list(p)
    if len(p) != g.n:
        raise ValueError(f"permutation degree {len(p)} does not match n={g.n}")
    if sorted(p) != list(range(g.n)):
        raise ValueError("not a permutation")
    vc = [0] * g.n
    for v, c in enumerate(g.vertex_coloring):
        vc[p[v]] = c
    return ColoredGraph(
        g.n,
        [(p[u], p[v]) for u, v in g.edges],
        tuple(vc),
        {(p[u], p[v]): c for (u, v), c in g.arc_coloring.items()},
        {(p[u], p[v]): c for (u, v), c in g.pair_coloring.items()},
    )


def is_isomorphism(g1: ColoredGraph, g2: ColoredGraph, phi: Sequence[int]) -> bool:
    """True iff ``phi`` (``phi[v]`` image of ``v``) is a color-preserving isomorphism."""
    if g1.n != g2.n or len(phi) != g1.n or sorted(phi) != list(range(g2.n)):
        return False
    return apply_permutation(g1, phi) == g2


# ------------------------------------------------------------ connectivity

def _component_sets(adj, vertices) -> list[list[int]]:
    seen = set()
    out = []
    for s in sorted(vertices):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in vertices and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def connected_components(g: ColoredGraph, removed: Iterable[int] = ()) -> list[tuple[int, ...]]:
    """Components of ``g - removed`` in canonical order.

    Order key: (sorted vertex colors, size, minimum vertex id).  Only the last
    key is not isomorphism-invariant.
    """
    removed = set(removed)
    keep = set(range(g.n)) - removed
    comps = _component_sets(g.adj, keep)
    comps.sort(key=lambda c: (sorted(g.vertex_coloring[v] for v in c), len(c), c[0]))
    return [tuple(c) for c in comps]


def is_connected(g: ColoredGraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def neighborhood(g: ColoredGraph, s: Iterable[int]) -> tuple[frozenset, frozenset]:
    """Return ``(N(S), N[S])``: the open and closed neighbourhood of ``S``."""
    s = set(s)
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    closed = set(s)
    for v in s:
        closed |= g.adj[v]
    return frozenset(closed - s), frozenset(closed)


def degree_sequence(g: ColoredGraph) -> list[int]:
    return sorted(g.degrees())


def color_histogram(g: ColoredGraph) -> Counter:
    return Counter(g.vertex_coloring)
