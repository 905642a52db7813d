"""Ordered-tuple subset construction on a right Fischer cover.

Vertices are increasing tuples of cover states.  Starting from the tuple of
all states, each vertex ``i`` and symbol ``a`` contribute the tuple of
``a``-successors of ``i``.  An ``a``-edge ``i -> j`` is kept when ``j`` is that
successor tuple, except that a drop to a single state needs at least two
``a``-edges leaving ``i`` (paths actually merging).  After trimming to the
part with bi-infinite paths, the size-``k`` pieces carry the points with
``k`` uniformly separated preimages:

* an edge on which two states of the tuple merge, leaving a tuple with an
  infinite past, means the shift is not AFT (the cover is not left-closing);
  a drop to size 1 is the typical case, but the merge may also sit just
  before a tuple that trimming removes;
* otherwise any edge changing size means it is AFT but not PET;
* PET with every size->=2 piece a disjoint union of cycles means near Markov.

A size-``k`` path need not list all preimages of its image point: subsets
of a larger recurrent tuple can survive trimming as "shadows" (for example
pairs rotating inside a 3-cycle of equal labels).  The points with exactly
``k`` preimages are therefore read off the label shifts of the parts with
sizes ``>= k`` rather than from which sizes occur.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from soficflow import graphs
from soficflow.fischer import FischerCover
from soficflow.presentation import SymbolicPresentation, natural_key

Tuple = tuple[int, ...]
TupleEdge = tuple[Tuple, Tuple, str]
CoverLike = Union[FischerCover, SymbolicPresentation]

LOWER_BOUND = "uniformly-separated spectrum (lower bound)"


def _presentation(cover: CoverLike) -> SymbolicPresentation:
    return cover.presentation if isinstance(cover, FischerCover) else cover


def successor(i: Iterable[int], a: str, cover: CoverLike) -> frozenset[int]:
    """Terminal states of ``a``-edges starting in ``{i}``."""
    return _presentation(cover).step(i, a)


def render_tuple(i: Tuple, p: SymbolicPresentation) -> str:
    return "[" + " ".join(p.states[s] for s in i) + "]"


def render_edge(e: TupleEdge, p: SymbolicPresentation) -> str:
    return f"{render_tuple(e[0], p)} -{e[2]}-> {render_tuple(e[1], p)}"


def _vertex_key(i: Tuple):
    return (len(i), i)


@dataclass(frozen=True)
class TupleGraph:
    presentation: SymbolicPresentation
    vertices: tuple[Tuple, ...]
    edges: tuple[TupleEdge, ...]
    stage: str  # "raw" or "trimmed"
    rounds: int = 0  # passes until the vertex sets stopped growing
    merges: tuple[TupleEdge, ...] = ()  # merging edges with an infinite past (set by trimming)

    def sizes(self) -> list[int]:
        return sorted({len(i) for i in self.vertices})

    def component(self, k: int) -> "TupleGraph":
        """The size-``k`` piece with the edges inside it."""
        vs = tuple(i for i in self.vertices if len(i) == k)
        es = tuple(e for e in self.edges if len(e[0]) == k and len(e[1]) == k)
        return TupleGraph(self.presentation, vs, es, self.stage, self.rounds)

    def adjacency(self, k: int | None = None) -> tuple[list[Tuple], list[list[int]]]:
        """Integer adjacency, of the whole graph or of its size-``k`` piece."""
        g = self if k is None else self.component(k)
        order = sorted(g.vertices, key=_vertex_key)
        pos = {v: n for n, v in enumerate(order)}
        M = [[0] * len(order) for _ in order]
        for i, j, _ in g.edges:
            M[pos[i]][pos[j]] += 1
        return order, M

    def out_edges(self, i: Tuple) -> list[TupleEdge]:
        return [e for e in self.edges if e[0] == i]

    def render(self, e: TupleEdge) -> str:
        return render_edge(e, self.presentation)


def build_tuple_graph(cover: CoverLike) -> TupleGraph:
    """Raw tuple graph: fixpoint vertex set and the two-condition edge rule."""
    p = _presentation(cover)
    if p.n == 0:
        return TupleGraph(p, (), (), "raw", 0)
    trans = p.transitions()
    alphabet = sorted(p.alphabet, key=natural_key)

    def succ(i: Tuple, a: str) -> Tuple:
        return tuple(sorted({t for s in i for t in trans.get((s, a), ())}))

    level = {tuple(range(p.n))}
    rounds = 0
    while True:
        new = {j for i in level for a in alphabet if (j := succ(i, a))}
        if new <= level:
            break
        level |= new
        rounds += 1

    edges = []
    for i in sorted(level, key=_vertex_key):
        for a in alphabet:
            j = succ(i, a)
            if not j:
                continue
            if len(i) > len(j) == 1:
                merging = sum(len(trans.get((s, a), ())) for s in i)
                if merging < 2:
                    continue
            edges.append((i, j, a))
    vertices = tuple(sorted(level, key=_vertex_key))
    return TupleGraph(p, vertices, tuple(edges), "raw", rounds)


def is_merge(e: TupleEdge, p: SymbolicPresentation) -> bool:
    """Do two states of the source tuple land on one state along ``e``?"""
    trans = p.transitions()
    return sum((s, e[2]) in trans for s in e[0]) > len(e[1])


def trim_tuple_graph(g: TupleGraph) -> TupleGraph:
    """Largest subgraph where every vertex has an incoming and an outgoing edge.

    Merging edges leaving the part with an infinite past are recorded too:
    the merged path always continues in the cover, even when the target
    tuple is later pruned (a drop to one state where nothing merges).
    """
    keep = graphs.essential_vertices(g.vertices, g.edges)
    vs = tuple(v for v in g.vertices if v in keep)
    es = tuple(e for e in g.edges if e[0] in keep and e[1] in keep)
    past = graphs.backward_infinite(g.vertices, g.edges)
    merges = tuple(e for e in g.edges if e[0] in past and is_merge(e, g.presentation))
    return TupleGraph(g.presentation, vs, es, "trimmed", g.rounds, merges)


def at_least(g: TupleGraph, k: int) -> tuple[set, list[TupleEdge]]:
    """Essential part of the subgraph on tuples of size at least ``k``."""
    vs = [v for v in g.vertices if len(v) >= k]
    es = [e for e in g.edges if len(e[0]) >= k and len(e[1]) >= k]
    keep = graphs.essential_vertices(vs, es)
    return keep, [e for e in es if e[0] in keep and e[1] in keep]


def exact_multicard(g: TupleGraph) -> frozenset[int]:
    """Sizes k >= 2 carrying a point with exactly k preimages (AFT covers).

    Paths through tuples of size >= k label exactly the points with at least
    k preimages, so k occurs iff that label shift is not inside the one for
    sizes >= k + 1.
    """
    sizes = sorted({len(v) for v in g.vertices if len(v) >= 2})
    out = set()
    for k in sizes:
        _, es = at_least(g, k)
        hv, hs = at_least(g, k + 1)
        if es and not graphs.labeled_shift_included(es, hv, hs):
            out.add(k)
    return frozenset(out)


def shadowed(g: TupleGraph, start: Tuple, word: Iterable[str]) -> bool:
    """Does a larger tuple containing ``start`` also close up reading ``word``?

    Then the periodic point has more preimages than ``start`` lists.
    """
    word = list(word)
    for k in range(len(start) + 1, g.presentation.n + 1):
        if any(set(start) <= set(v) for v in closed_walk(g, k, word)):
            return True
    return False


@dataclass(frozen=True)
class ShiftClassReport:
    is_aft: bool
    is_pet: bool
    is_near_markov: bool
    multicard: frozenset[int]
    multicard_kind: str = "exact"
    tuple_sizes: frozenset[int] = frozenset()  # sizes k >= 2 with a nonempty piece
    aft_witness: TupleEdge | None = None  # edge on which two tuple states merge
    pet_witness: TupleEdge | None = None  # edge changing tuple size (or the merge)
    near_markov_witness: Tuple | None = None  # vertex without exactly one in- and out-edge
    extra: dict = field(default_factory=dict, compare=False)


def classify(g: TupleGraph) -> ShiftClassReport:
    if g.stage != "trimmed":
        raise ValueError("classify expects a trimmed tuple graph")
    sizes = frozenset(len(i) for i in g.vertices if len(i) >= 2)
    drops = sorted((e for e in g.edges if len(e[0]) != len(e[1])),
                   key=lambda e: (-len(e[0]), len(e[1]), e[0], e[1], natural_key(e[2])))
    # merges inside the trimmed graph first: they give the shortest story
    inner = set(g.edges)
    merging = sorted(g.merges, key=lambda e: (e not in inner, -len(e[0]), len(e[1]),
                                              e[0], e[1], natural_key(e[2])))
    is_aft = not merging
    is_pet = is_aft and not drops

    nm_witness = None
    if is_pet:
        for k in sorted(sizes):
            comp = g.component(k)
            indeg = {v: 0 for v in comp.vertices}
            outdeg = dict(indeg)
            for i, j, _ in comp.edges:
                outdeg[i] += 1
                indeg[j] += 1
            bad = [v for v in comp.vertices if indeg[v] != 1 or outdeg[v] != 1]
            if bad:
                nm_witness = bad[0]
                break
    is_near_markov = is_pet and nm_witness is None

    return ShiftClassReport(
        is_aft=is_aft,
        is_pet=is_pet,
        is_near_markov=is_near_markov,
        multicard=exact_multicard(g) if is_aft else sizes,
        multicard_kind="exact" if is_aft else LOWER_BOUND,
        tuple_sizes=sizes,
        aft_witness=merging[0] if merging else None,
        pet_witness=drops[0] if drops else (merging[0] if merging else None),
        near_markov_witness=nm_witness,
    )


def analyze(cover: CoverLike) -> tuple[TupleGraph, ShiftClassReport]:
    """Build, trim and classify in one go."""
    g = trim_tuple_graph(build_tuple_graph(cover))
    return g, classify(g)


def closed_walk(g: TupleGraph, k: int, word: Iterable[str]) -> list[Tuple]:
    """Vertices of the size-``k`` piece that return to themselves reading ``word``."""
    comp = g.component(k)
    step = {(i, a): j for i, j, a in comp.edges}
    word = list(word)
    out = []
    for v in comp.vertices:
        cur = v
        for a in word:
            cur = step.get((cur, a))
            if cur is None:
                break
        if cur == v:
            out.append(v)
    return out
