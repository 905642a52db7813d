"""Skewing permutations on the equal-size pieces of the tuple graph.

An edge ``E: i -> j`` labeled ``a`` between size-``k`` tuples gets the
permutation ``tau(E)`` sending position ``t`` of ``i`` to the position of the
``a``-successor of ``i_t`` inside ``j``.  Collecting these per cell gives a
square matrix over the nonnegative group ring of the symmetric group.

Convention: a path ``E_1 ... E_L`` has weight ``tau(E_L) o ... o tau(E_1)``,
i.e. earlier edges act first.  ``opp`` switches to the other convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from soficflow.presentation import SymbolicPresentation
from soficflow.tupleflow import Tuple, TupleEdge, TupleGraph, analyze


class SkewError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]  # one-line notation, 1-based: t -> images[t-1]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise SkewError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def from_cycles(cls, k: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(1, k + 1))
        for c in cycles:
            for a, b in zip(c, list(c[1:]) + [c[0]]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, t: int) -> int:
        return self.images[t - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        if other.degree != self.degree:
            raise SkewError("degree mismatch")
        return Permutation(tuple(self.images[t - 1] for t in other.images))

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for t, s in enumerate(self.images, 1):
            inv[s - 1] = t
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(s == t for t, s in enumerate(self.images, 1))

    def cycles(self, include_fixed: bool = True) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for t in range(1, self.degree + 1):
            if t in seen:
                continue
            c = [t]
            seen.add(t)
            s = self(t)
            while s != t:
                c.append(s)
                seen.add(s)
                s = self(s)
            if include_fixed or len(c) > 1:
                out.append(tuple(c))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def __str__(self) -> str:
        moved = self.cycles(include_fixed=False)
        if not moved:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in moved)


def skew_permutation(edge: TupleEdge, cover: SymbolicPresentation) -> Permutation:
    """The permutation matching label-``a`` cover edges ``i_t -> j_tau(t)``."""
    i, j, a = edge
    if len(i) != len(j):
        raise SkewError("skewing permutations need equal-size tuples")
    trans = cover.transitions()
    pos = {s: n for n, s in enumerate(j, 1)}
    img = []
    for s in i:
        targets = [t for t in trans.get((s, a), ()) if t in pos]
        if len(targets) != 1:
            raise SkewError(f"no unique {a}-edge from state {cover.states[s]} into the target tuple")
        img.append(pos[targets[0]])
    return Permutation(tuple(img))


def cycle_weight(path: Sequence[TupleEdge], cover: SymbolicPresentation) -> Permutation:
    """``tau(E_L) o ... o tau(E_1)`` for the path ``E_1 ... E_L``."""
    if not path:
        raise SkewError("empty path")
    w = Permutation.identity(len(path[0][0]))
    for e in path:
        w = skew_permutation(e, cover).compose(w)
    return w


def lift_lengths(length: int, weight: Permutation) -> list[int]:
    """Orbit lengths of the preimages of a base cycle of ``length`` with ``weight``."""
    return sorted(length * len(c) for c in weight.cycles())


Cell = tuple[Permutation, ...]


@dataclass(frozen=True)
class GroupRingMatrix:
    k: int
    rows: tuple[Tuple, ...]  # vertex order of the size-k piece
    cells: tuple[tuple[Cell, ...], ...]  # each cell a sorted multiset of permutations

    @property
    def dim(self) -> int:
        return len(self.rows)

    def augmentation(self) -> list[list[int]]:
        return augmentation(self)

    def cell_strings(self, one_line: bool = False) -> list[list[list[str]]]:
        fmt = (lambda g: list(g.images)) if one_line else str
        return [[[fmt(g) for g in cell] for cell in row] for row in self.cells]

    def render(self) -> str:
        lines = []
        for row in self.cells:
            parts = [" + ".join(str(g) for g in cell) if cell else "0" for cell in row]
            lines.append("[ " + " | ".join(parts) + " ]")
        return "\n".join(lines)


def _cell(perms: Iterable[Permutation]) -> Cell:
    return tuple(sorted(perms))


def group_ring_matrix(k: int, rows: Sequence[Tuple], entries: dict) -> GroupRingMatrix:
    pos = {v: n for n, v in enumerate(rows)}
    grid: list[list[list[Permutation]]] = [[[] for _ in rows] for _ in rows]
    for (i, j), perms in entries.items():
        grid[pos[i]][pos[j]].extend(perms)
    cells = tuple(tuple(_cell(c) for c in row) for row in grid)
    return GroupRingMatrix(k, tuple(rows), cells)


def _trimmed(source) -> TupleGraph:
    if isinstance(source, TupleGraph):
        if source.stage != "trimmed":
            raise SkewError("expected a trimmed tuple graph")
        return source
    return analyze(source)[0]


def build_Bk(source, k: int) -> GroupRingMatrix:
    """Matrix over the group ring of S_k carried by the size-``k`` piece.

    ``source`` is a trimmed tuple graph or anything ``tupleflow.analyze`` accepts.
    """
    g = _trimmed(source)
    comp = g.component(k)
    if k < 2 or not comp.vertices:
        raise SkewError(f"{k} is not a multiplicity of this cover")
    rows, _ = comp.adjacency()
    entries: dict = {}
    for e in comp.edges:
        entries.setdefault((e[0], e[1]), []).append(skew_permutation(e, g.presentation))
    return group_ring_matrix(k, rows, entries)


def augmentation(M: GroupRingMatrix) -> list[list[int]]:
    return [[len(cell) for cell in row] for row in M.cells]


def opp(M: GroupRingMatrix) -> GroupRingMatrix:
    cells = tuple(tuple(_cell(g.inverse() for g in cell) for cell in row) for row in M.cells)
    return GroupRingMatrix(M.k, M.rows, cells)


@dataclass(frozen=True)
class PointExtension:
    """The size-``k`` piece together with its skew labels."""
    base: TupleGraph
    k: int
    labels: tuple[tuple[TupleEdge, Permutation], ...]

    def label(self, e: TupleEdge) -> Permutation:
        return dict(self.labels)[e]

    def lift(self, path: Sequence[TupleEdge], j: int) -> list[int]:
        """Cover states visited by the lift of ``path`` starting at position ``j``."""
        labels = dict(self.labels)
        states = [path[0][0][j - 1]] if path else []
        for e in path:
            j = labels[e](j)
            states.append(e[1][j - 1])
        return states


def point_extension(source, k: int) -> PointExtension:
    g = _trimmed(source)
    comp = g.component(k)
    if k < 2 or not comp.vertices:
        raise SkewError(f"{k} is not a multiplicity of this cover")
    labels = tuple((e, skew_permutation(e, g.presentation)) for e in comp.edges)
    return PointExtension(comp, k, labels)


def all_Bk(source) -> dict[int, GroupRingMatrix]:
    g = _trimmed(source)
    return {k: build_Bk(g, k) for k in sorted({len(v) for v in g.vertices}) if k >= 2}

