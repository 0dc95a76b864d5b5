import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bag_tree, flower, graph_and_perm, switch, theta
from topiso.closure import ClosureParams
from topiso.generators import generate
from topiso.graph import ColoredGraph, apply_permutation, is_isomorphism
from topiso.hypergraph import BudgetExceeded
from topiso.iso import (
    DETECTED,
    ISOMORPHIC,
    NON_ISOMORPHIC,
    automorphism_group,
    bounding_coset,
    check_decomposition,
    isomorphisms,
    recurse,
    tree_decomposition,
)
from topiso.oracle import brute_automorphisms, brute_iso, coset_as_set


def agrees(g1, g2, params, **kw):
    res = isomorphisms(g1, g2, params, **kw)
    want = brute_iso(g1, g2)
    if res.outcome == DETECTED:
        return res
    assert res.isomorphic == bool(want)
    if want:
        assert res.coset.size() == want.size()
        assert res.coset.equals(want)
        assert is_isomorphism(g1, g2, res.representative())
    return res


# ---------------------------------------------------------------- examples

def test_random_trees_contain_p():
    rnd = random.Random(1)
    for _ in range(15):
        n = rnd.randint(1, 20)
        g = generate(f"tree({n})", rnd.randrange(10**6))
        p = list(range(n))
        rnd.shuffle(p)
        res = isomorphisms(g, apply_permutation(g, p), ClosureParams(3))
        assert res.outcome == ISOMORPHIC
        assert res.coset.contains(dict(enumerate(p)))


def test_cycle_vs_two_triangles():
    res = isomorphisms(generate("cycle(6)"), generate("disjoint_union(cycle(3),cycle(3))"), ClosureParams(5))
    assert res.outcome == NON_ISOMORPHIC and res.representative() is None


def test_cubic_pairs():
    rnd = random.Random(3)
    seen_non = 0
    for _ in range(8):
        g = generate("random_regular(10,3)", rnd.randrange(10**6))
        other = switch(g, rnd)
        res = agrees(g, other, ClosureParams(5))
        seen_non += res.outcome == NON_ISOMORPHIC
    assert seen_non > 0


def test_recurse_examples():
    one = ColoredGraph(1, [], (0,))
    c = recurse(one, one, 7, ClosureParams(3))
    assert not c.empty and c.representative() == {}
    assert recurse(one, ColoredGraph(1, [], (1,)), 7, ClosureParams(3)).empty
    star = generate("star(4)")
    assert not recurse(star, star, 9, ClosureParams(3)).empty
    assert recurse(star, generate("path(5)"), 9, ClosureParams(3)).empty
    # boundary colored 1: restriction of the isomorphisms to the boundary
    g = ColoredGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)], (1, 0, 0, 0, 1))
    r = recurse(g, g, 1, ClosureParams(3, override_t=2))
    assert r.size() == 2 and r.contains({0: 4, 4: 0})


def test_bounding_coset_examples():
    g = generate("cycle(6)")
    V = range(6)
    same = bounding_coset(g, 0, V, g, 0, V)
    assert same.contains({v: v for v in V})
    assert bounding_coset(g, 0, V, generate("path(6)"), 0, V).empty
    b = bounding_coset(g, 0, V, g, 3, V)
    true = brute_iso(g, g).sub_coset({0: 3})
    assert coset_as_set(true) <= coset_as_set(b)
    # a bound: every map respecting the refined classes {3}, {2,4}, {1,5}, {0}
    assert b.size() == 4 and true.size() == 2


def test_aut_examples():
    assert automorphism_group(generate("cycle(6)"), ClosureParams(5)).order() == 12
    assert automorphism_group(generate("path(4)"), ClosureParams(3)).order() == 2
    rigid = ColoredGraph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)])
    assert brute_automorphisms(rigid).order() == 1
    assert automorphism_group(rigid, ClosureParams(3)).order() == 1


def test_decomposition_examples():
    k4 = generate("clique(4)")
    root = tree_decomposition(k4, ClosureParams(6))
    assert root.bag == frozenset(range(4)) and not root.children
    for seed in range(5):
        t = generate("tree(15)", seed)
        for params in (ClosureParams(3), ClosureParams(3, override_t=2)):
            rep = check_decomposition(t, tree_decomposition(t, params), 3)
            assert rep["ok"] and rep["max_adhesion"] <= 2


def test_errors():
    g = ColoredGraph(2, [(0, 1)], pair_coloring={(0, 1): 1})
    with pytest.raises(ValueError):
        isomorphisms(g, g, ClosureParams(3))
    big = generate("random_regular(12,3)", 5)
    with pytest.raises(BudgetExceeded):
        isomorphisms(big, big, ClosureParams(5), budget=2)


def test_detected_with_small_threshold():
    c = generate("cycle(7)")
    res = isomorphisms(c, c, ClosureParams(4, override_t=1))
    assert res.outcome == DETECTED and res.side == 1
    res = isomorphisms(generate("path(4)"), c, ClosureParams(5, override_t=1))
    assert res.outcome in (NON_ISOMORPHIC, DETECTED)


def test_stats_and_memo():
    g = flower([3, 3, 4, 4])
    p = list(reversed(range(g.n)))
    plain = isomorphisms(g, apply_permutation(g, p), ClosureParams(4, override_t=2))
    memo = isomorphisms(g, apply_permutation(g, p), ClosureParams(4, override_t=2), memo=True)
    assert plain.coset.equals(memo.coset)
    s = plain.stats.as_dict()
    assert s["recursive_calls"] >= 1 and s["max_depth"] >= 1 and "total" in s["timings"]


# -------------------------------------------------------------- properties

@given(data=graph_and_perm(max_n=9, colors=2), t=st.sampled_from([None, 1, 2, 3]))
@settings(max_examples=80)
def test_matches_brute_and_symmetric(data, t):
    g, p = data
    rnd = random.Random(len(g.edges) * 7 + g.n)
    other = apply_permutation(g, p) if rnd.random() < 0.6 else switch(apply_permutation(g, p), rnd)
    params = ClosureParams(max(3, g.n + 1) if t is None else 4, override_t=t)
    fwd = agrees(g, other, params)
    back = isomorphisms(other, g, params)
    if DETECTED in (fwd.outcome, back.outcome):
        return
    assert fwd.outcome == back.outcome
    if fwd.isomorphic:
        rep = fwd.coset.representative()
        assert back.coset.contains({b: a for a, b in rep.items()})
        for gen in fwd.coset.group.generators:
            m = fwd.coset.map_of(gen)
            assert is_isomorphism(g, other, [m[v] for v in range(g.n)])


FAMILIES = [
    lambda r: flower([r.randint(3, 5) for _ in range(r.randint(2, 4))]),
    lambda r: theta([r.randint(1, 3) for _ in range(r.randint(2, 4))]),
]


@pytest.mark.parametrize("fam", range(len(FAMILIES)))
def test_recursive_families(fam):
    rnd = random.Random(fam)
    deep = 0
    for _ in range(15):
        g = FAMILIES[fam](rnd)
        if g.n > 12:
            continue
        p = list(range(g.n))
        rnd.shuffle(p)
        h = apply_permutation(g, p)
        for other in (h, switch(h, rnd)):
            res = agrees(g, other, ClosureParams(4, override_t=2))
            deep = max(deep, res.stats.max_depth)
    assert deep >= 1


@pytest.mark.parametrize("t", [None, 2])
def test_decomposition_invariance(t):
    rnd = random.Random(11)
    for _ in range(10):
        g = flower([rnd.randint(3, 5) for _ in range(3)]) if rnd.random() < 0.5 else generate(
            f"tree({rnd.randint(5, 14)})", rnd.randrange(10**6))
        params = ClosureParams(4, override_t=t)
        p = list(range(g.n))
        rnd.shuffle(p)
        a = tree_decomposition(g, params)
        b = tree_decomposition(apply_permutation(g, p), params)
        assert check_decomposition(g, a, 4)["ok"]
        assert bag_tree(a, p) == bag_tree(b)


def test_stabilizer_structure():
    rnd = random.Random(5)
    for _ in range(10):
        g = flower([rnd.randint(3, 4) for _ in range(3)])
        aut = brute_automorphisms(g)
        root = tree_decomposition(g, ClosureParams(4, override_t=2))
        for node in root.nodes():
            assert any(aut.pointwise_stabilizer([v]).set_stabilizer_check(node.bag) for v in node.bag)


def test_disconnected_inputs():
    a = generate("disjoint_union(cycle(4),path(3),path(3))")
    b = generate("disjoint_union(path(3),cycle(4),path(3))")
    res = agrees(a, b, ClosureParams(4))
    assert res.isomorphic and res.coset.size() == 8 * 2 * 2 * 2
    root = tree_decomposition(a, ClosureParams(4))
    assert root.bag == frozenset() and len(root.children) == 3
    assert check_decomposition(a, root, 4)["ok"]
