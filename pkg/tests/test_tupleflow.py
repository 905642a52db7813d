import pytest
from hypothesis import given

from conftest import covers, load
from soficflow.fischer import as_cover
from soficflow.presentation import SymbolicPresentation
from soficflow.tupleflow import (LOWER_BOUND, analyze, build_tuple_graph, classify, closed_walk,
                                 render_tuple, successor, trim_tuple_graph)


def named(states, edges):
    return SymbolicPresentation.from_named_edges(states, edges)


def big(g):
    return {render_tuple(v, g.presentation) for v in g.vertices if len(v) >= 2}


def big_edges(g):
    return {g.render(e) for e in g.edges if len(e[0]) >= 2}


def test_successor_C(C):
    assert successor((1, 2, 3), "b", C) == {1, 2, 3}
    assert successor((1, 2, 3), "d", C) == {1}
    assert successor((1, 2, 3), "e", C) == set()
    assert successor((1, 2), "zzz", C) == set()


def test_accepts_fischer_cover_object(B):
    assert build_tuple_graph(as_cover(B)).edges == build_tuple_graph(B).edges


def test_raw_B(B):
    g = build_tuple_graph(B)
    assert (0, 1, 2) in g.vertices
    assert "[1 2 3] -b-> [2 3]" in big_edges(g)


def test_raw_C(C):
    g = build_tuple_graph(C)
    edges = big_edges(trim_tuple_graph(g))
    assert {"[2 3 4] -a-> [2 3 4]", "[2 3 4] -b-> [2 3 4]", "[2 3 4] -c-> [2 3 4]",
            "[1 2] -d-> [1 2]"} == edges


def test_raw_even(even):
    g = build_tuple_graph(even)
    assert big_edges(g) == {"[A B] -0-> [A B]"}
    # the 1-move sends [A B] to [A] along a single edge: condition (2) drops it
    assert not any(e[0] == (0, 1) and e[2] == "1" for e in g.edges)


def test_trim_B_keeps_witness(B):
    g = trim_tuple_graph(build_tuple_graph(B))
    assert "[1 2 3] -b-> [2 3]" in big_edges(g)


def test_trim_C_vertices(C):
    g = trim_tuple_graph(build_tuple_graph(C))
    assert big(g) == {"[2 3 4]", "[1 2]"}
    assert not any(len(e[0]) != len(e[1]) for e in g.edges)
    # size-one part is a copy of the cover
    assert sorted(e for e in g.edges if len(e[0]) == 1) == sorted(
        ((e.src,), (e.dst,), e.label) for e in C.edges)


def test_trim_removes_dead_end():
    # every move out of [1 2] lands on one state along a single edge
    p = named("12", [("1", "2", "a"), ("2", "1", "b")])
    g = build_tuple_graph(p)
    assert (0, 1) in g.vertices and not g.out_edges((0, 1))
    assert big(trim_tuple_graph(g)) == set()


def test_trimmed_is_essential(B, C, even):
    for p in (B, C, even):
        t = trim_tuple_graph(build_tuple_graph(p))
        outs = {e[0] for e in t.edges}
        ins = {e[1] for e in t.edges}
        assert set(t.vertices) == outs == ins


def test_classify_B(B):
    _, r = analyze(B)
    assert r.is_aft and not r.is_pet and not r.is_near_markov
    assert r.pet_witness == ((0, 1, 2), (1, 2), "b")
    assert r.multicard == {2, 3}


def test_classify_C(C):
    _, r = analyze(C)
    assert r.is_pet and r.multicard == {2, 3}
    assert not r.is_near_markov and r.near_markov_witness == (1, 2, 3)


def test_classify_even(even):
    _, r = analyze(even)
    assert r.is_pet and r.is_near_markov and r.multicard == {2}


def test_not_aft_example():
    # two a-loops at different states merging through b: [1 2] -b-> [1]
    p = named("12", [("1", "1", "a"), ("2", "2", "a"), ("1", "1", "b"), ("2", "1", "b"),
                     ("1", "2", "c")])
    _, r = analyze(p)
    assert not r.is_aft and r.aft_witness is not None
    assert r.multicard_kind == LOWER_BOUND


def test_merge_without_drop_to_single_state():
    p = load("merge_drop.shift")
    g, r = analyze(p)
    assert all(len(e[1]) >= 2 for e in g.edges if len(e[0]) >= 2)  # no drop to size 1
    assert not r.is_aft and not r.is_pet
    assert g.render(r.aft_witness) == "[1 2 3] -a-> [1 2]"


def test_merge_before_pruned_tuple():
    p = load("late_merge.shift")
    g, r = analyze(p)
    # the trimmed graph alone is one size-preserving cycle
    assert big_edges(g) == {"[2 4 5] -b-> [2 4 5]"}
    assert not r.is_aft and not r.is_pet and not r.is_near_markov
    assert g.render(r.aft_witness) == "[2 4 5] -d-> [1 2]"
    assert r.aft_witness not in g.edges


def test_shadow_pairs_not_a_multiplicity():
    g, r = analyze(load("shadow.shift"))
    assert r.is_pet and r.is_near_markov
    assert r.tuple_sizes == {2, 3}
    assert r.multicard == {3}
    assert big(g.component(2)) == {"[2 3]", "[3 4]", "[2 4]"}
    assert closed_walk(g, 3, "c") == [(1, 2, 3)]


def test_injective_cover_degenerate():
    p = named("12", [("1", "1", "a"), ("1", "2", "b"), ("2", "1", "c")])
    _, r = analyze(p)
    assert r.is_aft and r.is_pet and r.is_near_markov and r.multicard == set()


def test_classify_requires_trimmed(B):
    with pytest.raises(ValueError):
        classify(build_tuple_graph(B))


def test_B_bar_matrices(C):
    g, _ = analyze(C)
    assert g.adjacency(3) == ([(1, 2, 3)], [[3]])
    assert g.adjacency(2) == ([(0, 1)], [[1]])


def test_closed_walk(C):
    g, _ = analyze(C)
    assert closed_walk(g, 3, "ab") == [(1, 2, 3)]
    assert closed_walk(g, 2, "a") == []


@given(covers)
def test_structural_invariants(p):
    raw = build_tuple_graph(p)
    assert raw.rounds <= 2 ** p.n
    assert all(list(v) == sorted(set(v)) and v for v in raw.vertices)
    assert all(len(i) >= len(j) for i, j, _ in raw.edges)
    g = trim_tuple_graph(raw)
    r = classify(g)
    assert (not r.is_near_markov) or r.is_pet
    assert (not r.is_pet) or r.is_aft
    assert (r.aft_witness is None) == r.is_aft
    assert (r.pet_witness is None) == r.is_pet
