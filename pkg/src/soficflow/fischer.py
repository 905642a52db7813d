"""Right Fischer covers: construction from any presentation, and verification.

The cover is read off the subset automaton started at the full state set:
after trimming and merging follower-equivalent subsets, the strongly
connected piece containing a subset of least cardinality is the cover.
Its states are the follower sets of synchronizing words.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from soficflow import graphs
from soficflow.presentation import (Edge, PresentationError, SymbolicPresentation,
                                    ValidationReport, natural_key, refine_partition,
                                    subset_automaton, validate)


class FischerError(PresentationError):
    pass


@dataclass(frozen=True)
class MagicWordCertificate:
    word: tuple[str, ...]
    state: str  # the single state every path labeled ``word`` ends in

    def __str__(self) -> str:
        return " ".join(self.word)


@dataclass(frozen=True)
class FischerCover:
    presentation: SymbolicPresentation
    provenance: tuple[frozenset[str], ...]  # input states behind each cover state
    magic_words: tuple[tuple[str, ...], ...]

    @property
    def n(self) -> int:
        return self.presentation.n


def default_magic_bound(n: int) -> int:
    return (2 ** n) * max(n, 1)


def fischer_cover(p: SymbolicPresentation, magic_bound: int | None = None) -> FischerCover:
    """Right Fischer cover of the irreducible sofic shift presented by ``p``.

    ``p`` must be essential and irreducible; it need not be right-resolving.
    """
    report = validate(p)
    if not (report.is_essential and report.is_irreducible):
        raise FischerError("; ".join(report.failures()[:2]))
    bound = default_magic_bound(p.n) if magic_bound is None else magic_bound

    full = frozenset(range(p.n))
    subsets, delta = subset_automaton(p, [full])
    arcs = [(U, V) for (U, _), V in delta.items()]
    essential = graphs.essential_vertices(subsets, arcs)
    blocks = refine_partition(subsets, p.alphabet, delta)

    smallest = min(essential, key=lambda U: (len(U), sorted(U)))
    quotient_arcs = {(blocks[U], blocks[V]) for (U, _), V in delta.items()
                     if U in essential and V in essential}
    home = blocks[smallest]
    comp = next(c for c in graphs.strong_components({blocks[U] for U in essential}, quotient_arcs)
                if home in c)

    # a representative subset (least cardinality) for each merged class
    members: dict[int, list[frozenset[int]]] = {}
    for U in essential:
        if blocks[U] in comp:
            members.setdefault(blocks[U], []).append(U)
    rep = {b: min(us, key=lambda U: (len(U), sorted(U))) for b, us in members.items()}
    order = sorted(comp, key=lambda b: (sorted(rep[b]), len(rep[b])))
    index = {b: k for k, b in enumerate(order)}

    names = []
    for b in order:
        name = "_".join(p.states[i] for i in sorted(rep[b]))
        while name in names:
            name += "_"
        names.append(name)

    alphabet = sorted(p.alphabet, key=natural_key)
    edges = []
    for b in order:
        U = rep[b]
        for a in alphabet:
            V = delta.get((U, a))
            if V is not None and V in essential and blocks[V] in comp:
                edges.append(Edge(index[b], index[blocks[V]], a))
    cover = SymbolicPresentation(tuple(names), tuple(edges))

    words = _shortest_words(full, delta, lambda U: blocks.get(U) in comp and U in essential,
                            lambda U: index[blocks[U]], len(order))
    for w in words:
        if w is None or len(w) > bound:
            raise FischerError(f"synchronizing-word search exceeded bound {bound}")
    provenance = tuple(frozenset(p.states[i] for i in rep[b]) for b in order)
    return FischerCover(cover, provenance, tuple(words))


def _shortest_words(start, delta, accept, slot, count):
    """Breadth-first: shortest nonempty word from ``start`` reaching each slot."""
    words: list = [None] * count
    by_src: dict = {}
    for (U, a), V in delta.items():
        by_src.setdefault(U, []).append((a, V))
    for moves in by_src.values():
        moves.sort(key=lambda t: natural_key(t[0]))
    seen: dict = {}
    queue: deque = deque()
    for a, V in by_src.get(start, ()):
        if V not in seen:
            seen[V] = (a,)
            queue.append(V)
    while queue:
        U = queue.popleft()
        w = seen[U]
        if accept(U) and words[slot(U)] is None:
            words[slot(U)] = w
        for a, V in by_src.get(U, ()):
            if V not in seen:
                seen[V] = w + (a,)
                queue.append(V)
    return words


def find_magic_word(p: SymbolicPresentation, magic_bound: int | None = None):
    """Shortest nonempty word collapsing the full state set to one state, or None."""
    bound = default_magic_bound(p.n) if magic_bound is None else magic_bound
    if p.n == 0:
        return None
    trans = p.transitions()
    alphabet = sorted(p.alphabet, key=natural_key)
    full = frozenset(range(p.n))
    seen = {full: ()}
    queue = deque([full])
    while queue:
        U = queue.popleft()
        w = seen[U]
        if len(w) >= bound:
            continue
        for a in alphabet:
            V = frozenset(t for s in U for t in trans.get((s, a), ()))
            if not V:
                continue
            if len(V) == 1:
                return MagicWordCertificate(w + (a,), p.states[next(iter(V))])
            if V not in seen:
                seen[V] = w + (a,)
                queue.append(V)
    return None


@dataclass(frozen=True)
class FischerVerification:
    report: ValidationReport
    certificate: MagicWordCertificate | None

    @property
    def is_fischer(self) -> bool:
        return self.report.ok and self.certificate is not None


def verify_fischer(p: SymbolicPresentation, magic_bound: int | None = None) -> FischerVerification:
    """Check that ``p`` is already its own right Fischer cover."""
    report = validate(p)
    cert = find_magic_word(p, magic_bound) if report.is_right_resolving else None
    return FischerVerification(report, cert)


def as_cover(p: SymbolicPresentation, magic_bound: int | None = None) -> FischerCover:
    """Wrap a presentation that already is a Fischer cover, or raise."""
    v = verify_fischer(p, magic_bound)
    if not v.is_fischer:
        reasons = v.report.failures() or ["no synchronizing word within bound"]
        raise FischerError("not a Fischer cover: " + "; ".join(reasons))
    # magic word followed by a path to each state
    words = [_route(p, v.certificate, i) for i in range(p.n)]
    return FischerCover(p, tuple(frozenset([s]) for s in p.states), tuple(words))


def _route(p: SymbolicPresentation, cert: MagicWordCertificate, target: int) -> tuple[str, ...]:
    start = p.index(cert.state)
    prev = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == target:
            break
        for e in sorted(p.out_edges(s), key=lambda e: natural_key(e.label)):
            if e.dst not in prev:
                prev[e.dst] = (s, e.label)
                queue.append(e.dst)
    path = []
    s = target
    while prev[s] is not None:
        s, a = prev[s]
        path.append(a)
    return tuple(cert.word) + tuple(reversed(path))
