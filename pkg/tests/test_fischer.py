import random

import pytest
from hypothesis import given, strategies as st

from conftest import covers
from soficflow.fischer import (FischerError, as_cover, default_magic_bound, find_magic_word,
                               fischer_cover, verify_fischer)
from soficflow.oracle import follower_partition_by_words, language
from soficflow.presentation import (Edge, SymbolicPresentation, isomorphic, subdivide,
                                    symbol_expand, trim, validate)


def named(states, edges):
    return SymbolicPresentation.from_named_edges(states, edges)


def test_C_is_its_own_cover(C):
    c = fischer_cover(C)
    assert isomorphic(c.presentation, C)
    assert c.provenance == tuple(frozenset([s]) for s in C.states)
    assert verify_fischer(C).is_fischer


def test_redundant_even_shift(even):
    p = named(["A", "B", "B'"], [("A", "A", "1"), ("A", "B", "0"), ("A", "B'", "0"),
                                 ("B", "A", "0"), ("B'", "A", "0")])
    c = fischer_cover(p)
    assert c.n == 2
    assert isomorphic(c.presentation, even)


def test_duplicate_state_merged_right_resolving(even):
    # B and B2 have identical followers; the subset construction collapses them
    p = named(["A", "B", "B2"], [("A", "A", "1"), ("A", "B", "0"), ("B", "A", "0"),
                                 ("B2", "A", "0"), ("A", "B2", "2"), ("B", "B2", "3"),
                                 ("B2", "B2", "3")])
    assert not validate(p).is_follower_separated
    c = fischer_cover(p)
    assert c.n == 2
    assert any(len(prov) == 1 for prov in c.provenance)


def test_full_two_shift_distinct_labels():
    p = named("12", [("1", "1", "a"), ("1", "2", "b"), ("2", "1", "c"), ("2", "2", "d")])
    assert isomorphic(fischer_cover(p).presentation, p)


def test_verify_B(B):
    v = verify_fischer(B)
    assert v.is_fischer
    assert v.certificate.word == ("c",)  # breadth-first: c sends {1,2,3} to {3}
    assert v.certificate.state == "3"


def test_single_loop_magic_word():
    v = verify_fischer(named("1", [("1", "1", "a")]))
    assert v.is_fischer and v.certificate.word == ("a",)


def test_identical_states_not_separated():
    v = verify_fischer(named("12", [("1", "2", "a"), ("2", "1", "a"), ("1", "2", "b"),
                                    ("2", "1", "b")]))
    assert not v.report.is_follower_separated and not v.is_fischer


def test_no_magic_word_for_periodic_cycle():
    # a 2-cycle with one label never synchronizes; it is not follower-separated either
    p = named("12", [("1", "2", "a"), ("2", "1", "a")])
    assert find_magic_word(p) is None


def test_as_cover_rejects(B):
    with pytest.raises(FischerError):
        as_cover(named("12", [("1", "2", "a"), ("2", "1", "a")]))
    cov = as_cover(B)
    assert len(cov.magic_words) == 3


def test_reducible_rejected():
    with pytest.raises(FischerError):
        fischer_cover(named("12", [("1", "1", "a"), ("2", "2", "a")]))


def test_bound_enforced(B):
    with pytest.raises(FischerError):
        fischer_cover(B, magic_bound=0)
    assert default_magic_bound(3) == 24


def test_magic_words_reach_their_states(C):
    c = fischer_cover(C)
    p = c.presentation
    for i, w in enumerate(c.magic_words):
        U = frozenset(range(p.n))
        for a in w:
            U = p.step(U, a)
        assert U == {i}


@st.composite
def presentations(draw):
    """Irreducible, essential, possibly non-right-resolving presentations."""
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    while True:
        n = rng.randint(1, 5)
        alphabet = "abc"[:rng.randint(1, 3)]
        edges = [Edge(rng.randrange(n), rng.randrange(n), rng.choice(alphabet))
                 for _ in range(rng.randint(1, 3 * n))]
        p = trim(SymbolicPresentation(tuple(str(i) for i in range(n)), tuple(edges)))
        if p.n and validate(p).is_irreducible:
            return SymbolicPresentation(p.states, p.edges)


@given(presentations())
def test_language_preserved(p):
    c = fischer_cover(p)
    assert language(p, 7) == language(c, 7)


@given(presentations())
def test_output_verifies_and_is_idempotent(p):
    c = fischer_cover(p).presentation
    assert verify_fischer(c).is_fischer
    assert isomorphic(fischer_cover(c).presentation, c)


@given(presentations())
def test_cover_commutes_with_expansion(p):
    a = sorted(p.alphabet)[0]
    lhs = fischer_cover(subdivide(p, a)).presentation
    rhs = symbol_expand(fischer_cover(p).presentation, a)
    assert isomorphic(lhs, rhs)


@given(covers)
def test_word_partition_matches_refinement(p):
    assert len(follower_partition_by_words(p, max(p.n - 1, 1))) == p.n
