"""Random right Fischer covers for experiments and property tests."""
from __future__ import annotations

import random

from soficflow.fischer import find_magic_word
from soficflow.presentation import Edge, SymbolicPresentation, validate


def random_right_resolving(rng: random.Random, n: int, k: int, density: float = 0.6) -> SymbolicPresentation:
    """Each (state, symbol) gets an edge with probability ``density``, to a uniform target."""
    alphabet = [chr(ord("a") + i) for i in range(k)]
    edges = [Edge(s, rng.randrange(n), a)
             for s in range(n) for a in alphabet if rng.random() < density]
    return SymbolicPresentation(tuple(str(i + 1) for i in range(n)), tuple(edges))


def is_valid_cover(p: SymbolicPresentation) -> bool:
    r = validate(p)
    return r.ok and find_magic_word(p) is not None


def random_cover(rng: random.Random, max_states: int = 6, max_alphabet: int = 4,
                 attempts: int = 10_000) -> SymbolicPresentation:
    """Rejection-sample a valid Fischer cover (essential, irreducible, separated, synchronizing)."""
    for _ in range(attempts):
        n = rng.randint(1, max_states)
        k = rng.randint(1, max_alphabet)
        p = random_right_resolving(rng, n, k, rng.uniform(0.4, 0.9))
        if p.edges and is_valid_cover(p):
            return p
    raise RuntimeError("no valid cover found")


def random_covers(seed: int, count: int, **kw) -> list[SymbolicPresentation]:
    rng = random.Random(seed)
    return [random_cover(rng, **kw) for _ in range(count)]
