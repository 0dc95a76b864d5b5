import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph_and_perm, graphs, random_graph
from topiso.closure import (
    ClosureParams,
    PairClosure,
    check_separator_bound,
    closure_graph,
    closure_of,
    closure_pair,
    find_initial_set,
    pair_coloring,
    t_of_h,
    tcr_stable,
)
from topiso.generators import generate
from topiso.graph import ColoredGraph, apply_permutation
from topiso.refinement import wl

C6 = generate("cycle(6)")


# ---------------------------------------------------------------- examples

def test_t_of_h():
    assert t_of_h(5) == 1_800_000
    assert ClosureParams(5).t == 1_800_000
    assert ClosureParams(5, override_t=3).t == 3
    assert t_of_h(2, a_deg=3) == 144 * 9 * 32
    for bad in (dict(h=0), dict(h=3, a_deg=1), dict(h=3, override_t=0)):
        with pytest.raises(ValueError):
            ClosureParams(**bad)


def test_tcr_examples():
    assert tcr_stable(C6, 1).num_colors == 1
    assert tcr_stable(generate("clique(2)"), 2).num_colors == 2
    assert tcr_stable(generate("star(5)"), 5).num_colors == 6
    assert tcr_stable(generate("star(5)"), 4).num_colors == 2


def test_closure_examples():
    assert closure_of(C6, 2, {0}) == frozenset(range(6))
    # the antipode is a singleton after plain CR, so it joins the closure
    assert closure_of(C6, 1, {0}) == {0, 3}
    assert closure_of(generate("cycle(7)"), 1, {0}) == {0}
    for t in (1, 4, 100):
        assert closure_of(C6, t, range(6)) == frozenset(range(6))


def test_closure_pair_examples():
    g = ColoredGraph(5)
    chi = np.zeros((5, 5), dtype=np.int64)
    assert closure_pair(g, chi, 3, {0}) == {0}
    assert closure_pair(C6, wl(C6, 2).colors, 2, {0}) == frozenset(range(6))
    assert closure_pair(C6, wl(C6, 2).colors, 2, ()) == frozenset()
    chi = np.zeros((5, 5), dtype=np.int64)
    chi[2, 2] = 1
    assert closure_pair(g, chi, 1, ()) == {2}
    with pytest.raises(ValueError):
        closure_pair(g, np.zeros((4, 4)), 1, ())


def test_closure_graph_examples():
    chi = pair_coloring(C6)
    full = closure_graph(C6, chi, 2)
    assert len(full.edges) == 30 and len(full.scc) == 1 and all(full.maximal_flags)
    anti = closure_graph(C6, chi, 1)
    assert anti.edges == {(v, (v + 3) % 6) for v in range(6)}
    assert len(anti.scc) == 3 and all(anti.maximal_flags)
    c7 = generate("cycle(7)")
    empty = closure_graph(c7, pair_coloring(c7), 1)
    assert not empty.edges and len(empty.scc) == 7 and all(empty.maximal_flags)


def test_initial_set_examples():
    r = find_initial_set(C6, ClosureParams(3, override_t=2))
    assert r.outcome == "Found" and r.X == frozenset(range(6))
    for n in (3, 5, 7):
        r = find_initial_set(generate(f"clique({n})"), ClosureParams(n + 1, override_t=n - 1))
        assert r.found and r.X == frozenset(range(n))
    # below n - 1 the neighbor class of an individualized vertex never splits
    assert not find_initial_set(generate("clique(5)"), ClosureParams(6, override_t=3)).found
    assert find_initial_set(C6, ClosureParams(3, override_t=1)).outcome == "Detected"
    with pytest.raises(ValueError):
        find_initial_set(generate("disjoint_union(cycle(3),cycle(3))"), ClosureParams(3))


def test_initial_set_wl2_flag():
    r = find_initial_set(C6, ClosureParams(3, override_t=2), wl_dim=2)
    assert r.found
    with pytest.raises(ValueError):
        pair_coloring(C6, wl_dim=4)


def test_separator_examples():
    p5 = generate("path(5)")
    r = check_separator_bound(p5, {2}, 2)
    assert r.ok and sorted(s for _, s in r.boundaries) == [1, 1]
    assert check_separator_bound(p5, range(5), 2).boundaries == []
    assert not check_separator_bound(p5, {2}, 1).ok
    g = generate("random_regular(20,3)", 7)
    res = find_initial_set(g, ClosureParams(5))
    D = closure_of(g, t_of_h(5), res.X)
    assert check_separator_bound(g, D, 5).ok


# ------------------------------------------------------- closure algebra

T_VALUES = [1, 2, 3, 5, 10]
small_sets = st.sets(st.integers(0, 9), max_size=3)


def _clip(X, n):
    return frozenset(v for v in X if v < n)


@given(graphs(min_n=1, max_n=10, colors=2), st.sampled_from(T_VALUES), small_sets)
def test_extensive_and_idempotent(g, t, X):
    X = _clip(X, g.n)
    D = closure_of(g, t, X)
    assert X <= D
    assert closure_of(g, t, D) == D


@given(graphs(min_n=1, max_n=10, colors=2), st.sampled_from(T_VALUES), st.sampled_from(T_VALUES), small_sets, small_sets)
def test_monotone(g, t1, t2, X, Y):
    t1, t2 = sorted((t1, t2))
    X, Y = _clip(X, g.n), _clip(X | Y, g.n)
    assert closure_of(g, t1, X) <= closure_of(g, t2, X)
    assert closure_of(g, t1, X) <= closure_of(g, t1, Y)


@given(data=graph_and_perm(min_n=1, max_n=9), t=st.sampled_from(T_VALUES), X=small_sets)
def test_closure_invariant(data, t, X):
    g, p = data
    X = _clip(X, g.n)
    D = closure_of(g, t, X)
    assert closure_of(apply_permutation(g, p), t, {p[v] for v in X}) == {p[v] for v in D}


@given(graphs(min_n=1, max_n=8, colors=2), st.sampled_from(T_VALUES))
@settings(max_examples=40)
def test_closure_graph_structure(g, t):
    chi = pair_coloring(g)
    cg = closure_graph(g, chi, t)
    pc = PairClosure(g, chi, t)
    for v in range(g.n):
        assert cg.closure(v) == pc({v})
    edges = cg.edges
    for u, v in edges:
        for v2, w in edges:
            if v2 == v and u != w:
                assert (u, w) in edges
    for comp in cg.scc:
        for a in comp:
            for b in comp:
                assert a == b or (a, b) in edges
    diag = np.diag(chi)
    maximal = [v for v in range(g.n) if cg.maximal_flags[v]]
    for v in maximal:
        for w in maximal:
            if diag[v] == diag[w]:
                Dv, Dw = cg.closure(v), cg.closure(w)
                assert Dv == Dw or not (Dv & Dw)


# ----------------------------------------------------------- initial set

@given(graphs(min_n=1, max_n=9, connected=True), st.sampled_from(T_VALUES))
@settings(max_examples=40)
def test_initial_set_payload(g, t):
    r = find_initial_set(g, ClosureParams(g.n + 2, override_t=t))
    full = find_initial_set(g, ClosureParams(g.n + 2, override_t=t), exhaustive=True)
    assert r.found == full.found and r.X == full.X
    if r.found:
        diag = np.diag(r.chi)
        assert r.X == frozenset(np.flatnonzero(diag == r.c0).tolist())
        pc = PairClosure(g, r.chi, t)
        assert all(r.X <= pc({v}) for v in r.X)
    else:
        assert all(not ok for _, ok in r.tried)


@given(data=graph_and_perm(min_n=1, max_n=9, connected=True), t=st.sampled_from(T_VALUES))
@settings(max_examples=40)
def test_initial_set_invariant(data, t):
    g, p = data
    params = ClosureParams(4, override_t=t)
    a = find_initial_set(g, params)
    b = find_initial_set(apply_permutation(g, p), params)
    assert a.found == b.found and a.c0 == b.c0
    assert {p[v] for v in a.X} == b.X


@pytest.mark.parametrize("d", [3, 4])
def test_max_degree_never_detected(d):
    rng = random.Random(d)
    for n in (8, 14, 20):
        g = generate(f"random_max_degree({n},{d})", rng.randrange(10**6))
        r = find_initial_set(g, ClosureParams(d + 2), exhaustive=True)
        assert r.found
        D = closure_of(g, t_of_h(d + 2), r.X)
        assert check_separator_bound(g, D, d + 2).ok


def test_random_graph_tcr_split_count():
    rng = random.Random(4)
    for _ in range(10):
        g = random_graph(rng, 10, 0.3)
        c = tcr_stable(g, 2, {0})
        assert c.round_history >= 0
        assert closure_of(g, 2, {0}) == frozenset(
            v for v in range(10) if list(c.colors).count(c.colors[v]) == 1
        )
