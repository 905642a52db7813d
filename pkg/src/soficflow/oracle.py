"""Brute-force, definition-level computations for differential testing.

The brute-force routines never touch the tuple graph.  The language is read off paths, periodic
preimages are counted by iterating a word's transition map, and PET is
decided on the fiber product of the cover with itself.  ``cross_check``
then compares each of these with the fast algorithms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from soficflow import graphs
from soficflow.presentation import SymbolicPresentation, natural_key
from soficflow.skew import augmentation, build_Bk, cycle_weight, lift_lengths
from soficflow.tupleflow import CoverLike, TupleGraph, analyze

DEFAULT_WORD_BOUND = 8
DEFAULT_PERIOD_BOUND = 6

Word = tuple[str, ...]


def _presentation(cover: CoverLike) -> SymbolicPresentation:
    return getattr(cover, "presentation", cover)


def _alphabet(p: SymbolicPresentation) -> list[str]:
    return sorted(p.alphabet, key=natural_key)


# ---------------------------------------------------------------- language

@dataclass(frozen=True)
class LanguageSample:
    bound: int
    words: tuple[frozenset[Word], ...]  # words[L] = label words of length L

    def __getitem__(self, L: int) -> frozenset[Word]:
        return self.words[L]

    def __eq__(self, other) -> bool:
        return isinstance(other, LanguageSample) and self.words == other.words

    def __hash__(self):
        return hash(self.words)


def language(p: CoverLike, L: int = DEFAULT_WORD_BOUND) -> LanguageSample:
    """All labels of paths of length at most ``L``."""
    p = _presentation(p)
    frontier: dict[Word, set[int]] = {(): set(range(p.n))}
    words = [frozenset(frontier)]
    by_src: dict[int, list] = {}
    for e in p.edges:
        by_src.setdefault(e.src, []).append(e)
    for _ in range(L):
        nxt: dict[Word, set[int]] = {}
        for w, ends in frontier.items():
            for s in ends:
                for e in by_src.get(s, ()):
                    nxt.setdefault(w + (e.label,), set()).add(e.dst)
        frontier = nxt
        words.append(frozenset(frontier))
    return LanguageSample(L, tuple(words))


def follower_partition_by_words(p: CoverLike, L: int = DEFAULT_WORD_BOUND) -> list[frozenset[int]]:
    """States grouped by the words of length at most ``L`` readable from them."""
    p = _presentation(p)
    alphabet = _alphabet(p)
    trans = p.transitions()

    def accepted(s: int) -> frozenset[Word]:
        out = set()
        frontier = {(): {s}}
        for _ in range(L):
            nxt: dict = {}
            for w, ends in frontier.items():
                for t in ends:
                    for a in alphabet:
                        for u in trans.get((t, a), ()):
                            nxt.setdefault(w + (a,), set()).add(u)
            out.update(nxt)
            frontier = nxt
        return frozenset(out)

    groups: dict[frozenset, list[int]] = {}
    for s in range(p.n):
        groups.setdefault(accepted(s), []).append(s)
    return sorted((frozenset(g) for g in groups.values()), key=min)


# ---------------------------------------------------------------- periodic points

def lyndon_words(alphabet: list[str], length: int):
    """Primitive words that are lexicographically least among their rotations."""
    for w in product(alphabet, repeat=length):
        if all(w < w[r:] + w[:r] for r in range(1, length)):
            yield w


@dataclass(frozen=True)
class CensusRow:
    period: int
    word: Word  # base orbit: the periodic point word^infinity
    count: int  # number of cover preimages
    orbit_lengths: tuple[int, ...]  # lengths of the preimage orbits

    def render(self) -> str:
        lengths = ",".join(map(str, self.orbit_lengths))
        return f"period {self.period}  ({' '.join(self.word)})^inf  preimages {self.count}  orbits [{lengths}]"


def word_map(p: SymbolicPresentation, word: Word) -> dict[int, int]:
    """The partial map s -> end of the path from s labeled ``word`` (right-resolving)."""
    trans = p.transitions()
    out = {}
    for s in range(p.n):
        cur = s
        for a in word:
            nxt = trans.get((cur, a))
            if not nxt:
                cur = None
                break
            cur = nxt[0]
        if cur is not None:
            out[s] = cur
    return out


def periodic_cycles(f: dict[int, int]) -> list[list[int]]:
    """Cycles of a partial self-map on a finite set."""
    cycles = []
    seen: set[int] = set()
    for s in sorted(f):
        path = []
        cur = s
        while cur in f and cur not in seen and cur not in path:
            path.append(cur)
            cur = f[cur]
        if cur in path:
            cycles.append(path[path.index(cur):])
        seen.update(path)
    return cycles


def periodic_preimage_census(cover: CoverLike, P: int = DEFAULT_PERIOD_BOUND) -> tuple[CensusRow, ...]:
    """Preimage counts and orbit lengths over every periodic point of period at most ``P``.

    A bi-infinite path over ``w^inf`` visits, every ``|w|`` steps, a periodic
    state of the map read off ``w``; a cycle of length ``c`` of that map is one
    preimage orbit of length ``|w| c``.
    """
    p = _presentation(cover)
    if not p.is_right_resolving():
        raise ValueError("census needs a right-resolving cover")
    rows = []
    for period in range(1, P + 1):
        for w in lyndon_words(_alphabet(p), period):
            cycles = periodic_cycles(word_map(p, w))
            if cycles:
                lengths = tuple(sorted(period * len(c) for c in cycles))
                rows.append(CensusRow(period, w, sum(map(len, cycles)), lengths))
    return tuple(rows)


def census_prediction(g: TupleGraph, word: Word) -> tuple[int, tuple[int, ...]] | None:
    """Count and orbit lengths over ``word^inf`` predicted by the trimmed tuple graph.

    The point's own tuple is the largest closing vertex; smaller ones are
    shadows and must sit inside it.  Returns None when that fails (ambiguous).
    """
    step = {(e[0], e[2]): e for e in g.edges if len(e[0]) >= 2 and len(e[0]) == len(e[1])}
    closing = []
    for v in g.vertices:
        if len(v) < 2:
            continue
        cur, path = v, []
        for a in word:
            e = step.get((cur, a))
            if e is None:
                break
            path.append(e)
            cur = e[1]
        else:
            if cur == v:
                closing.append(path)
    if not closing:
        return 1, (len(word),)
    path = max(closing, key=lambda q: len(q[0][0]))
    top = set(path[0][0])
    if any(q is not path and not set(q[0][0]) < top for q in closing):
        return None
    return len(path[0][0]), tuple(lift_lengths(len(word), cycle_weight(path, g.presentation)))


# ---------------------------------------------------------------- fiber product

Pair = tuple[int, int]


@dataclass(frozen=True)
class FiberProduct:
    states: tuple[Pair, ...]  # pairs on bi-infinite paths of equal label
    edges: tuple[tuple[Pair, Pair, str], ...]
    components: tuple[frozenset[Pair], ...]  # strongly connected pieces
    slices: dict = field(compare=False)  # k -> pairs lying in recurrent separated k-sets

    @property
    def diagonal(self) -> frozenset[Pair]:
        return frozenset(s for s in self.states if s[0] == s[1])


def _separated_sets(p: SymbolicPresentation, k: int):
    """Graph on k-sets: U -> f(U, a) when every state of U moves on a and stays apart."""
    trans = p.transitions()
    vertices = [frozenset(c) for c in combinations(range(p.n), k)]
    arcs = []
    for U in vertices:
        for a in _alphabet(p):
            if all((s, a) in trans for s in U):
                V = frozenset(trans[s, a][0] for s in U)
                if len(V) == k:
                    arcs.append((U, V, a))
    return vertices, arcs


def fiber_product(cover: CoverLike) -> FiberProduct:
    p = _presentation(cover)
    by_label: dict[str, list] = {}
    for e in p.edges:
        by_label.setdefault(e.label, []).append(e)
    pairs = [(s, t) for s in range(p.n) for t in range(p.n)]
    arcs = []
    for a in sorted(by_label, key=natural_key):
        for e, f in product(by_label[a], repeat=2):
            arcs.append(((e.src, f.src), (e.dst, f.dst), a))
    keep = graphs.essential_vertices(pairs, arcs)
    states = tuple(sorted(keep))
    edges = tuple(sorted(x for x in arcs if x[0] in keep and x[1] in keep))
    comps = tuple(sorted((frozenset(c) for c in graphs.strong_components(states, edges)), key=min))

    slices: dict[int, frozenset[Pair]] = {1: frozenset(s for s in states if s[0] == s[1])}
    for k in range(2, p.n + 1):
        vs, sep = _separated_sets(p, k)
        rec = set().union(*graphs.strong_components(vs, sep)) if sep else set()
        inside = frozenset(s for s in states if s[0] != s[1] and any({*s} <= U for U in rec))
        if inside:
            slices[k] = inside
    return FiberProduct(states, edges, comps, slices)


@dataclass(frozen=True)
class FiberDecision:
    is_aft: bool
    is_pet: bool
    witness: str | None = None


def fiber_decision(cover: CoverLike) -> FiberDecision:
    """AFT and PET decided on the fiber product.

    AFT: no off-diagonal pair on a bi-infinite path can later reach the
    diagonal (distinct preimages never merge, i.e. the cover is left-closing).
    PET: additionally no family of k separated preimage paths with an
    infinite past can collapse to between 2 and k - 1 separated paths that
    continue forever.
    """
    p = _presentation(cover)
    fp = fiber_product(p)
    off = [s for s in fp.states if s[0] != s[1]]
    reach = graphs.forward_closure(off, [e for e in fp.edges if e[0][0] != e[0][1]])
    merged = sorted(s for s in reach if s[0] == s[1])
    if merged:
        return FiberDecision(False, False, f"distinct preimages merge at state {p.states[merged[0][0]]}")

    trans = p.transitions()
    past, future = {}, {}
    for k in range(2, p.n + 1):
        vs, sep = _separated_sets(p, k)
        past[k] = graphs.backward_infinite(vs, sep)
        future[k] = graphs.forward_infinite(vs, sep)
    for k in range(3, p.n + 1):
        for V in sorted(past[k], key=sorted):
            for a in _alphabet(p):
                W = frozenset(t for s in V for t in trans.get((s, a), ()))
                if 2 <= len(W) < k and W in future[len(W)]:
                    names = " ".join(p.states[s] for s in sorted(V))
                    return FiberDecision(True, False,
                                         f"separated set {{{names}}} collapses to size {len(W)} on {a}")
    return FiberDecision(True, True)


def pet_by_fiber(cover: CoverLike) -> bool:
    return fiber_decision(cover).is_pet


# ---------------------------------------------------------------- cross checks

@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class OracleReport:
    checks: tuple[Check, ...]
    census: tuple[CensusRow, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def compare_census(g: TupleGraph, census: tuple[CensusRow, ...]) -> list[str]:
    """Rows where the tuple-graph prediction and the brute-force census disagree."""
    bad = []
    for row in census:
        pred = census_prediction(g, row.word)
        if pred != (row.count, row.orbit_lengths):
            bad.append(f"({' '.join(row.word)})^inf: census {row.count} {list(row.orbit_lengths)}, "
                       f"tuple graph {pred}")
    return bad


def cross_check(cover: CoverLike, source: SymbolicPresentation | None = None,
                L: int = DEFAULT_WORD_BOUND, P: int = DEFAULT_PERIOD_BOUND) -> OracleReport:
    p = _presentation(cover)
    checks = []
    if source is not None:
        same = language(source, L) == language(p, L)
        checks.append(Check("language(input) = language(cover)", same, f"up to length {L}"))
    parts = follower_partition_by_words(p, L)
    checks.append(Check("follower partition by words is discrete", len(parts) == p.n,
                        "" if len(parts) == p.n else
                        "merged: " + ", ".join(" ".join(p.states[s] for s in sorted(g)) for g in parts
                                               if len(g) > 1)))

    g, report = analyze(p)
    fd = fiber_decision(p)
    checks.append(Check("AFT: tuple graph = fiber product", report.is_aft == fd.is_aft,
                        f"tuple {report.is_aft}, fiber {fd.is_aft}"))
    checks.append(Check("PET: tuple graph = fiber product", report.is_pet == fd.is_pet,
                        f"tuple {report.is_pet}, fiber {fd.is_pet}"))
    if report.is_aft:
        exact = multicard_by_fiber(p)
        checks.append(Check("MultiCard: tuple graph = separated-set shifts",
                            exact == report.multicard,
                            f"tuple {sorted(report.multicard)}, fiber "
                            f"{sorted(exact) if exact is not None else None}"))
    for k in sorted(report.tuple_sizes):
        order, Bbar = g.adjacency(k)
        aug = augmentation(build_Bk(g, k))
        checks.append(Check(f"augmentation(B_{k}) = integer matrix", aug == Bbar, ""))
    census = periodic_preimage_census(p, P)
    if report.is_pet:
        bad = compare_census(g, census)
        checks.append(Check(f"census = tuple-graph prediction (periods <= {P})", not bad,
                            "; ".join(bad[:3])))
    return OracleReport(tuple(checks), census)


# ---------------------------------------------------------------- exact multiplicities

def _essential_part(vertices, arcs):
    keep = graphs.essential_vertices(vertices, arcs)
    return keep, [x for x in arcs if x[0] in keep and x[1] in keep]


def multicard_by_fiber(cover: CoverLike) -> frozenset[int] | None:
    """Exact set of multiplicities k >= 2, or None when the cover is not AFT.

    Under AFT distinct preimages never meet, so a point has at least k
    preimages iff it carries a path of separated k-sets.  It has exactly k
    for some point iff the k-set shift is not inside the (k+1)-set shift.
    """
    p = _presentation(cover)
    if not fiber_decision(p).is_aft:
        return None
    parts = {}
    for k in range(2, p.n + 2):
        vs, arcs = _separated_sets(p, k) if k <= p.n else ([], [])
        parts[k] = _essential_part(vs, arcs)
    out = set()
    for k in range(2, p.n + 1):
        keep, arcs = parts[k]
        if not keep:
            continue
        nkeep, narcs = parts[k + 1]
        if not graphs.labeled_shift_included(arcs, nkeep, narcs):
            out.add(k)
    return frozenset(out)
