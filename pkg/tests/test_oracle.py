from hypothesis import given, settings, strategies as st

from conftest import covers, load
from soficflow.oracle import (CensusRow, census_prediction, compare_census, cross_check,
                              fiber_decision, fiber_product, follower_partition_by_words, language,
                              lyndon_words, multicard_by_fiber, pet_by_fiber,
                              periodic_cycles, periodic_preimage_census, word_map)
from soficflow.presentation import symbol_expand
from soficflow.tupleflow import analyze, closed_walk


def rows(p, P):
    return {" ".join(r.word): (r.count, r.orbit_lengths) for r in periodic_preimage_census(p, P)}


def test_language_even(even):
    L = language(even, 3)
    assert ("1", "0", "1") not in L[3]
    assert len(L[3]) == 7
    assert L[0] == {()}


def test_follower_partition_discrete(B, C, even):
    for p in (B, C, even):
        assert len(follower_partition_by_words(p, 4)) == p.n


def test_lyndon_counts():
    # necklace counts for binary words: 2, 1, 2, 3, 6, 9
    assert [len(list(lyndon_words(["a", "b"], n))) for n in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert list(lyndon_words(["a", "b"], 2)) == [("a", "b")]


def test_word_map_and_cycles(C):
    f = word_map(C, ("a",))
    assert sorted(len(c) for c in periodic_cycles(f)) == [1, 1, 1]
    assert periodic_cycles({0: 1, 1: 2, 2: 1, 3: 0}) == [[1, 2]]
    assert periodic_cycles({}) == []


def test_census_C(C):
    r = rows(C, 2)
    assert r["a"] == (3, (1, 1, 1))
    assert r["b"] == (3, (3,))
    assert r["d"] == (2, (1, 1))
    assert r["b c"] == (3, (2, 2, 2))
    assert r["a b"] == (3, (6,))


def test_census_B_and_even(B, even):
    assert rows(B, 1)["b"] == (2, (2,))
    assert rows(even, 1)["0"] == (2, (2,))
    assert rows(even, 1)["1"] == (1, (1,))


def test_census_row_render():
    row = CensusRow(1, ("a",), 3, (1, 1, 1))
    assert row.render() == "period 1  (a)^inf  preimages 3  orbits [1,1,1]"


def test_census_matches_prediction(C, even):
    for p in (C, even):
        g, _ = analyze(p)
        assert compare_census(g, periodic_preimage_census(p, 6)) == []


def test_shadow_census():
    p = load("shadow.shift")
    g, _ = analyze(p)
    assert rows(p, 1)["c"] == (3, (3,))
    # the size-2 cycle also closes on ccc, but the size-3 loop contains it
    assert census_prediction(g, ("c",)) == (3, (3,))


def test_shadow_pair_census():
    # [1 2] closes on a as well, but a^inf is carried by [1 2 3]
    p = load("shadow_pair.shift")
    g, r = analyze(p)
    assert closed_walk(g, 2, "a") == [(0, 1)]
    assert rows(p, 1)["a"] == (3, (1, 2))
    assert census_prediction(g, ("a",)) == (3, (1, 2))
    assert r.multicard == multicard_by_fiber(p) == {3}
    assert r.tuple_sizes == {2, 3}


def test_fiber_examples(B, C, even):
    d = fiber_decision(B)
    assert d.is_aft and not d.is_pet and "collapses" in d.witness
    assert pet_by_fiber(C) and pet_by_fiber(even)
    for name in ("merge_drop.shift", "late_merge.shift"):
        d = fiber_decision(load(name))
        assert not d.is_aft and not d.is_pet and "merge" in d.witness


def test_fiber_product_shape(even):
    fp = fiber_product(even)
    assert fp.slices[1] == {(0, 0), (1, 1)}
    assert fp.slices[2] == {(0, 1), (1, 0)}
    assert all(e[0] in fp.states and e[1] in fp.states for e in fp.edges)


def test_multicard_by_fiber(B, C, even):
    assert multicard_by_fiber(B) == {2, 3}
    assert multicard_by_fiber(C) == {2, 3}
    assert multicard_by_fiber(even) == {2}
    assert multicard_by_fiber(load("shadow.shift")) == {3}
    assert multicard_by_fiber(load("merge_drop.shift")) is None


def test_cross_check_examples(B, C, even):
    for p in (B, C, even, load("shadow.shift"), load("late_merge.shift")):
        report = cross_check(p, L=5, P=4)
        assert report.ok, [c for c in report.checks if not c.ok]


@given(covers)
def test_tuple_graph_matches_fiber_product(p):
    _, r = analyze(p)
    d = fiber_decision(p)
    assert (r.is_aft, r.is_pet) == (d.is_aft, d.is_pet)
    if r.is_aft:
        assert r.multicard == multicard_by_fiber(p)
    else:
        assert multicard_by_fiber(p) is None


@settings(max_examples=60)
@given(covers)
def test_census_agrees_on_pet_covers(p):
    g, r = analyze(p)
    if r.is_pet:
        assert compare_census(g, periodic_preimage_census(p, 4)) == []


@settings(max_examples=40)
@given(covers, st.data())
def test_fiber_verdicts_survive_expansion(p, data):
    # the fiber-product verdicts survive symbol expansion
    a = data.draw(st.sampled_from(sorted({e.label for e in p.edges})))
    q = symbol_expand(p, a)
    assert fiber_decision(q).is_aft == fiber_decision(p).is_aft
    assert fiber_decision(q).is_pet == fiber_decision(p).is_pet
    assert multicard_by_fiber(q) == multicard_by_fiber(p)
