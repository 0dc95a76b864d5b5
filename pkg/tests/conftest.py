import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from topiso.graph import ColoredGraph

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=9, colors=1, arc_colors=1, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    if connected and n > 1:
        perm = draw(st.permutations(range(n)))
        for i in range(1, n):
            j = draw(st.integers(0, i - 1))
            edges.add(tuple(sorted((perm[i], perm[j]))))
    vc = tuple(draw(st.integers(0, colors - 1)) for _ in range(n))
    arcs = {}
    if arc_colors > 1:
        for u, v in sorted(edges):
            arcs[(u, v)] = draw(st.integers(0, arc_colors - 1))
            arcs[(v, u)] = draw(st.integers(0, arc_colors - 1))
    return ColoredGraph(n, sorted(edges), vc, arcs)


@st.composite
def graph_and_perm(draw, **kw):
    g = draw(graphs(**kw))
    p = draw(st.permutations(range(g.n)))
    return g, list(p)


def random_graph(rng: random.Random, n: int, p: float, colors: int = 1) -> ColoredGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return ColoredGraph(n, edges, tuple(rng.randrange(colors) for _ in range(n)))


def relabel(p):
    return {v: p[v] for v in range(len(p))}


def flower(lengths):
    """Cycles of the given lengths sharing vertex 0."""
    edges, n = [], 1
    for length in lengths:
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, n))
            prev, n = n, n + 1
        edges.append((prev, 0))
    return ColoredGraph(n, edges)


def theta(lengths):
    """Internally disjoint paths between vertices 0 and 1 with the given inner lengths."""
    edges, n = [], 2
    for length in lengths:
        prev = 0
        for _ in range(length):
            edges.append((prev, n))
            prev, n = n, n + 1
        edges.append((prev, 1))
    return ColoredGraph(n, edges)


@pytest.fixture
def rng():
    return random.Random(12345)


def switch(g: ColoredGraph, rng: random.Random, tries: int = 50) -> ColoredGraph:
    """Degree-preserving double edge swap; returns ``g`` when none is found."""
    edges = sorted(g.edges)
    present = set(edges) | {(v, u) for u, v in edges}
    for _ in range(tries):
        if len(edges) < 2:
            break
        (a, b), (c, d) = rng.sample(edges, 2)
        if len({a, b, c, d}) < 4 or (a, d) in present or (c, b) in present:
            continue
        new = [e for e in edges if e not in {(a, b), (c, d)}] + [tuple(sorted((a, d))), tuple(sorted((c, b)))]
        return ColoredGraph(g.n, new, g.vertex_coloring)
    return g


def bag_tree(node, p=None):
    """Canonical nested form of a decomposition, optionally relabeled by ``p``."""
    f = (lambda v: v) if p is None else (lambda v: p[v])
    kids = sorted((bag_tree(c, p) for c in node.children), key=repr)
    return (tuple(sorted(f(v) for v in node.bag)), tuple(sorted(f(v) for v in node.boundary)), tuple(kids))
