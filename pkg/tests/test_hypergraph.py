import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topiso.hypergraph import (
    BudgetExceeded,
    CosetLabeledHypergraph,
    MultipleLabelingCoset,
    canonical_color,
    iso_coset_labeled,
    iso_hypergraph,
    iso_multi_coset,
    transport_label,
)
from topiso.oracle import brute_coset_labeled, brute_multi_coset, coset_as_set
from topiso.perm import Coset, LabelingCoset, PermGroup, from_cycles, identity, symmetric_group


def full(n):
    return Coset(range(n), range(n), symmetric_group(n), identity(n))


def random_lc(rnd, dom):
    dom = sorted(dom)
    k = len(dom)
    labels = list(range(k))
    rnd.shuffle(labels)
    gens = []
    for _ in range(rnd.randint(0, 2)):
        p = list(range(k))
        rnd.shuffle(p)
        gens.append(p)
    if rnd.random() < 0.3:
        return LabelingCoset(dom, dict(zip(dom, labels)), symmetric_group(k))
    return LabelingCoset(dom, dict(zip(dom, labels)), PermGroup(k, gens))


def random_hypergraph(rnd, n, tuples=True):
    edges = {}
    for _ in range(rnd.randint(0, 5)):
        e = frozenset(rnd.sample(range(n), rnd.randint(1, min(n, 3))))
        if e in edges:
            continue
        r = rnd.random()
        if r < 0.3:
            lab = None
        elif r < 0.8 or not tuples:
            lab = random_lc(rnd, e)
        else:
            lab = (random_lc(rnd, e), random_lc(rnd, e))
        edges[e] = (lab, rnd.randint(0, 1))
    return CosetLabeledHypergraph(range(n), edges)


def moved(h, phi):
    edges = {}
    for e, (lab, c) in h.labels.items():
        edges[frozenset(phi[x] for x in e)] = (transport_label(lab, {x: phi[x] for x in e}), c)
    return CosetLabeledHypergraph([phi[v] for v in h.vertices], edges)


def random_within(rnd, n):
    r = rnd.random()
    if r < 0.5:
        return full(n)
    if r < 0.8:
        cols = [rnd.randint(0, 1) for _ in range(n)]
        perm = list(range(n))
        rnd.shuffle(perm)
        return Coset.young(range(n), range(n), dict(enumerate(cols)), {perm[i]: cols[i] for i in range(n)})
    gens = []
    for _ in range(rnd.randint(1, 2)):
        p = list(range(n))
        rnd.shuffle(p)
        gens.append(p)
    rep = list(range(n))
    rnd.shuffle(rep)
    return Coset(range(n), range(n), PermGroup(n, gens), rep)


def instance(seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 7)
    h1 = random_hypergraph(rnd, n)
    perm = list(range(n))
    rnd.shuffle(perm)
    h2 = moved(h1, dict(enumerate(perm)))
    if rnd.random() < 0.3:
        h2 = random_hypergraph(rnd, n)
    return h1, h2, random_within(rnd, n)


# ---------------------------------------------------------------- examples

def test_plain_examples():
    h = (range(3), [{0, 1}])
    a = iso_hypergraph(h, h, full(3))
    assert a.size() == 2
    assert iso_hypergraph(h, (range(3), [{0, 1, 2}]), full(3)).empty
    ident = Coset(range(3), range(3), None, identity(3))
    assert iso_hypergraph(h, h, ident).size() == 1


def test_coset_labeled_examples():
    e = frozenset({0, 1})
    lc = LabelingCoset(e, {0: 0, 1: 1})
    h1 = CosetLabeledHypergraph(range(3), {e: (lc, 0)})
    same = iso_coset_labeled(h1, h1, full(3))
    assert same.contains({0: 0, 1: 1, 2: 2}) and same.size() == 1
    recolored = CosetLabeledHypergraph(range(3), {e: (lc, 1)})
    assert iso_coset_labeled(h1, recolored, full(3)).empty
    h2 = CosetLabeledHypergraph(range(3), {e: (LabelingCoset(e, {0: 1, 1: 0}), 0)})
    got = iso_coset_labeled(h1, h2, full(3))
    assert got.size() == 1 and got.representative() == {0: 1, 1: 0, 2: 2}
    assert coset_as_set(got) == brute_coset_labeled(h1, h2, full(3))


def test_validation():
    e = frozenset({0, 1})
    with pytest.raises(ValueError):
        CosetLabeledHypergraph(range(2), {e: (LabelingCoset({0, 2}, {0: 0, 2: 1}), 0)})
    with pytest.raises(ValueError):
        CosetLabeledHypergraph(range(2), [{0, 5}])
    h = CosetLabeledHypergraph(range(4), [{0, 1, 2}])
    with pytest.raises(ValueError):
        iso_coset_labeled(h, h, full(4), d=2)


def test_budget():
    c8 = CosetLabeledHypergraph(range(8), [{i, (i + 1) % 8} for i in range(8)])
    two_c4 = CosetLabeledHypergraph(range(8), [{i, (i + 2) % 8} for i in range(8)])
    with pytest.raises(BudgetExceeded):
        iso_coset_labeled(c8, two_c4, full(8), budget=3)
    assert iso_coset_labeled(c8, two_c4, full(8)).empty


def test_multi_examples():
    v = range(3)
    a = LabelingCoset(v, {0: 0, 1: 1, 2: 2})
    b = LabelingCoset(v, {0: 1, 1: 2, 2: 0})
    x = MultipleLabelingCoset(v, [(a, 0), (b, 1)])
    y = MultipleLabelingCoset(v, [(a, 0)])
    assert iso_multi_coset(x, y).empty
    auto = iso_multi_coset(x, x)
    assert auto.contains({0: 0, 1: 1, 2: 2})
    assert auto.size() == 1
    z = MultipleLabelingCoset(v, [(a.transport({0: 2, 1: 0, 2: 1}), 0), (b.transport({0: 2, 1: 0, 2: 1}), 1)])
    got = iso_multi_coset(x, z)
    assert got.size() == 1 and got.representative() == {0: 2, 1: 0, 2: 1}
    merged = MultipleLabelingCoset(v, [(a, 0), (a, 1)])
    assert len(merged.cosets) == 1 and merged.cosets[0][1] == ("multi", (0, 1))


def test_canonical_color():
    assert canonical_color({2, 1}) == (1, 2)
    assert canonical_color([frozenset({3, 1}), 0]) == ((1, 3), 0)


# -------------------------------------------------------------- properties

@pytest.mark.parametrize("chunk", range(4))
def test_coset_labeled_matches_brute(chunk):
    for seed in range(chunk * 50, chunk * 50 + 50):
        h1, h2, within = instance(seed)
        got = iso_coset_labeled(h1, h2, within)
        assert coset_as_set(got) == brute_coset_labeled(h1, h2, within), seed
        back = iso_coset_labeled(h2, h1, within.inverse())
        assert bool(back) == bool(got)
        if got:
            rep = got.representative()
            assert back.contains({v: k for k, v in rep.items()})


def random_multi(rnd, n, count):
    v = range(n)
    cosets = [(random_lc(rnd, v), rnd.randint(0, 1)) for _ in range(count)]
    return MultipleLabelingCoset(v, cosets)


@given(st.integers(0, 10**6))
@settings(max_examples=80)
def test_multi_matches_brute(seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 5)
    x1 = random_multi(rnd, n, rnd.randint(0, 3))
    perm = list(range(n))
    rnd.shuffle(perm)
    phi = dict(enumerate(perm))
    x2 = MultipleLabelingCoset(range(n), [(lc.transport(phi), c) for lc, c in x1.cosets if not isinstance(c, tuple)])
    if len(x2.cosets) != len(x1.cosets) or rnd.random() < 0.3:
        x2 = random_multi(rnd, n, len(x1.cosets))
    got = iso_multi_coset(x1, x2)
    assert coset_as_set(got) == brute_multi_coset(x1, x2)


def test_orbit_search_finds_generators():
    c6 = [{i, (i + 1) % 6} for i in range(6)]
    got = iso_hypergraph((range(6), c6), (range(6), c6), full(6))
    assert got.size() == 12
    rot = from_cycles([(0, 1, 2, 3, 4, 5)], 6)
    assert got.group.contains(rot)
