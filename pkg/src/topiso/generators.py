"""Seeded graph families used as benchmark and test corpora.

A family is named by a descriptor string such as ``"random_regular(10,3)"``
or ``"disjoint_union(cycle(3), cycle(3))"``.  Generation is deterministic in
``(descriptor, seed)``.
"""

from __future__ import annotations

import ast
import random

import networkx as nx

from .graph import ColoredGraph


class InfeasibleSpec(ValueError):
    pass


def _from_nx(gx: nx.Graph) -> ColoredGraph:
    mapping = {v: i for i, v in enumerate(sorted(gx.nodes))}
    return ColoredGraph(len(mapping), [(mapping[u], mapping[v]) for u, v in gx.edges])


def cycle(n: int, rng=None) -> ColoredGraph:
    if n < 3:
        raise InfeasibleSpec("cycle needs n >= 3")
    return ColoredGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int, rng=None) -> ColoredGraph:
    if n < 0:
        raise InfeasibleSpec("negative n")
    return ColoredGraph(n, [(i, i + 1) for i in range(n - 1)])


def clique(n: int, rng=None) -> ColoredGraph:
    if n < 0:
        raise InfeasibleSpec("negative n")
    return ColoredGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(k: int, rng=None) -> ColoredGraph:
    return ColoredGraph(k + 1, [(0, i) for i in range(1, k + 1)])


def grid(a: int, b: int, rng=None) -> ColoredGraph:
    if a < 1 or b < 1:
        raise InfeasibleSpec("grid sides must be positive")
    return _from_nx(nx.grid_2d_graph(a, b))


def tree(n: int, rng: random.Random) -> ColoredGraph:
    """Uniform random labelled tree via a Pruefer sequence."""
    if n < 1:
        raise InfeasibleSpec("tree needs n >= 1")
    if n <= 2:
        return path(n)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    return _from_nx(nx.from_prufer_sequence(seq))


def random_regular(n: int, d: int, rng: random.Random) -> ColoredGraph:
    if d < 0 or d >= n or (n * d) % 2:
        raise InfeasibleSpec(f"no {d}-regular graph on {n} vertices")
    return _from_nx(nx.random_regular_graph(d, n, seed=rng.randrange(2**32)))


def random_max_degree(n: int, d: int, rng: random.Random) -> ColoredGraph:
    """Connected random graph with maximum degree at most ``d``.

    A random degree-capped spanning tree is grown first, then random extra
    edges are added while both endpoints have spare degree.
    """
    if n < 1:
        raise InfeasibleSpec("n must be positive")
    if n > 2 and d < 2:
        raise InfeasibleSpec("connected graph with n > 2 needs d >= 2")
    if n == 2 and d < 1:
        raise InfeasibleSpec("connected graph with n = 2 needs d >= 1")
    order = list(range(n))
    rng.shuffle(order)
    deg = [0] * n
    edges = set()
    for i in range(1, n):
        v = order[i]
        open_ = [u for u in order[:i] if deg[u] < d]
        u = rng.choice(open_)
        edges.add((min(u, v), max(u, v)))
        deg[u] += 1
        deg[v] += 1
    for _ in range(n * d):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or deg[u] >= d or deg[v] >= d:
            continue
        e = (min(u, v), max(u, v))
        if e in edges:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return ColoredGraph(n, edges)


def disjoint_union(*graphs: ColoredGraph) -> ColoredGraph:
    edges, vc, off = [], [], 0
    arcs, pairs = {}, {}
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges]
        vc += list(g.vertex_coloring)
        arcs.update({(u + off, v + off): c for (u, v), c in g.arc_coloring.items()})
        pairs.update({(u + off, v + off): c for (u, v), c in g.pair_coloring.items()})
        off += g.n
    return ColoredGraph(off, edges, tuple(vc), arcs, pairs)


FAMILIES = {
    "cycle": cycle,
    "path": path,
    "clique": clique,
    "star": star,
    "grid": grid,
    "tree": tree,
    "random_regular": random_regular,
    "random_max_degree": random_max_degree,
}


def _build(node, rng):
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise InfeasibleSpec("expected a family call such as cycle(6)")
    name = node.func.id
    if node.keywords:
        raise InfeasibleSpec("keyword arguments are not supported")
    if name == "disjoint_union":
        return disjoint_union(*(_build(a, rng) for a in node.args))
    if name not in FAMILIES:
        raise InfeasibleSpec(f"unknown family {name!r}")
    args = []
    for a in node.args:
        if not (isinstance(a, ast.Constant) and isinstance(a.value, int)):
            raise InfeasibleSpec(f"arguments of {name} must be integers")
        args.append(a.value)
    try:
        return FAMILIES[name](*args, rng=rng)
    except TypeError as exc:
        raise InfeasibleSpec(f"bad arguments for {name}: {exc}") from None


def generate(spec: str, seed: int = 0) -> ColoredGraph:
    try:
        tree_ = ast.parse(spec.strip(), mode="eval")
    except SyntaxError as exc:
        raise InfeasibleSpec(f"cannot parse family descriptor {spec!r}") from exc
    return _build(tree_.body, random.Random(seed))
