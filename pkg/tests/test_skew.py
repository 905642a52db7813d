import random

import pytest
from hypothesis import given, strategies as st

from conftest import covers
from soficflow.oracle import census_prediction, lyndon_words
from soficflow.skew import (Permutation, SkewError, all_Bk, augmentation, build_Bk,
                            cycle_weight, lift_lengths, opp, point_extension, skew_permutation)
from soficflow.tupleflow import analyze

perms = st.integers(1, 6).flatmap(lambda k: st.permutations(range(1, k + 1))).map(
    lambda xs: Permutation(tuple(xs)))


def test_permutation_basics():
    r = Permutation((2, 3, 1))
    assert str(r) == "(1 2 3)"
    assert str(r.inverse()) == "(1 3 2)"
    assert str(Permutation.identity(3)) == "id"
    assert r.compose(r.inverse()).is_identity()
    assert Permutation.from_cycles(3, [(1, 2, 3)]) == r
    assert r.cycle_type() == (3,)
    with pytest.raises(SkewError):
        Permutation((1, 1))


def test_compose_order():
    s = Permutation((2, 1, 3))  # (1 2)
    t = Permutation((1, 3, 2))  # (2 3)
    # s o t applies t first: 2 -> 3 -> 3
    assert (s * t)(2) == 3
    assert (t * s)(2) == 1


@given(perms)
def test_inverse_involution(p):
    assert p.inverse().inverse() == p
    assert sum(len(c) for c in p.cycles()) == p.degree


def loop(g, v, a):
    return next(e for e in g.edges if e[0] == v and e[1] == v and e[2] == a)


def test_tau_C(C):
    g, _ = analyze(C)
    v = (1, 2, 3)
    assert skew_permutation(loop(g, v, "a"), C).is_identity()
    assert skew_permutation(loop(g, v, "b"), C).images == (2, 3, 1)
    assert skew_permutation(loop(g, v, "c"), C).images == (3, 1, 2)
    assert skew_permutation(loop(g, (0, 1), "d"), C).is_identity()


def test_tau_even(even):
    g, _ = analyze(even)
    assert str(skew_permutation(loop(g, (0, 1), "0"), even)) == "(1 2)"


def test_tau_rejects_size_change(B):
    g, _ = analyze(B)
    drop = next(e for e in g.edges if len(e[0]) == 3 and len(e[1]) == 2)
    with pytest.raises(SkewError):
        skew_permutation(drop, B)


def test_Bk_C(C):
    B3 = build_Bk(C, 3)
    assert B3.render() == "[ id + (1 2 3) + (1 3 2) ]"
    assert augmentation(B3) == [[3]]
    assert build_Bk(C, 2).render() == "[ id ]"
    with pytest.raises(SkewError):
        build_Bk(C, 4)


def test_Bk_even(even):
    M = build_Bk(even, 2)
    assert M.render() == "[ (1 2) ]"
    assert opp(M) == M


def test_opp():
    from soficflow.skew import group_ring_matrix
    M = group_ring_matrix(3, [(0,)], {((0,), (0,)): [Permutation((2, 3, 1))]})
    assert opp(M).render() == "[ (1 3 2) ]"
    assert opp(opp(M)) == M
    assert augmentation(opp(M)) == augmentation(M)
    empty = group_ring_matrix(2, [], {})
    assert augmentation(empty) == []


def test_cycle_weights(C, even):
    g, _ = analyze(even)
    w = cycle_weight([loop(g, (0, 1), "0")], even)
    assert lift_lengths(1, w) == [2]
    g, _ = analyze(C)
    b = loop(g, (1, 2, 3), "b")
    assert lift_lengths(1, cycle_weight([b], C)) == [3]
    a = loop(g, (1, 2, 3), "a")
    assert lift_lengths(2, cycle_weight([a, a], C)) == [2, 2, 2]
    # later edges compose on the left
    c = loop(g, (1, 2, 3), "c")
    assert cycle_weight([b, c], C) == skew_permutation(c, C) * skew_permutation(b, C)


def test_point_extension_lift(C):
    ext = point_extension(C, 3)
    b = next(e for e, _ in ext.labels if e[2] == "b")
    # position 1 is cover state 2; b moves it to state 3, then 4
    assert [C.states[s] for s in ext.lift([b, b], 1)] == ["2", "3", "4"]


@given(covers)
def test_augmentation_matches_integer_matrix(p):
    g, r = analyze(p)
    if not r.is_pet:
        return
    for k, M in all_Bk(g).items():
        assert augmentation(M) == g.adjacency(k)[1]
        assert augmentation(opp(M)) == augmentation(M)


@given(covers, st.randoms(use_true_random=False))
def test_conjugation_covariance(p, rnd):
    g, r = analyze(p)
    if not r.is_pet or not r.multicard:
        return
    order = list(range(p.n))
    rnd.shuffle(order)
    q = p.relabel_states(order)
    h, s = analyze(q)
    assert s.multicard == r.multicard
    for k in r.multicard:
        # on loops the relabeling conjugates tau, so cycle types survive
        types = lambda graph, pres: sorted(skew_permutation(e, pres).cycle_type()  # noqa: E731
                                          for e in graph.component(k).edges if e[0] == e[1])
        assert types(g, p) == types(h, q)
    # closed walks: weights are conjugated, so predicted orbit lengths agree
    for n in range(1, 4):
        for w in lyndon_words(sorted(p.alphabet), n):
            assert census_prediction(g, w) == census_prediction(h, w)
