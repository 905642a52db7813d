"""Exact integer invariants of flow equivalence.

Smith normal form and a fraction-free determinant give the Bowen-Franks
group cok(I - A) and det(I - A).  Together with the multiplicity graph of a
near Markov cover these decide flow equivalence for that class.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from soficflow import graphs
from soficflow.skew import cycle_weight
from soficflow.tupleflow import CoverLike, TupleGraph, analyze, render_tuple, shadowed

Matrix = list[list[int]]


class InvariantError(ValueError):
    pass


# ---------------------------------------------------------------- linear algebra

def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A or not B:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(A: Matrix) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(map(int, row)) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact: Sylvester's identity guarantees divisibility
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    """``U A V = D`` with ``U, V`` unimodular and ``D`` a nonnegative divisibility chain."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        for M in (D, U):
            M[dst] = [x + q * y for x, y in zip(M[dst], M[src])]

    def add_col(src, dst, q):  # col dst += q * col src
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            # least nonzero absolute value in the trailing block
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty |= D[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            U[t] = [-x for x in U[t]]
            D[t] = [-x for x in D[t]]
    return SmithDecomposition(U, D, V)


@dataclass(frozen=True)
class AbelianGroupPresentation:
    invariant_factors: tuple[int, ...]  # each >= 2, each dividing the next
    free_rank: int = 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " ⊕ ".join(parts) if parts else "0"


def cokernel(A: Matrix) -> AbelianGroupPresentation:
    """Cokernel of ``A`` acting on column vectors (rows of ``A`` index generators)."""
    m = len(A)
    diag = smith_normal_form(A).diagonal
    zeros = m - sum(1 for d in diag if d)
    return AbelianGroupPresentation(tuple(d for d in diag if d > 1), zeros)


def i_minus(A: Matrix) -> Matrix:
    n = len(A)
    return [[int(i == j) - A[i][j] for j in range(n)] for i in range(n)]


def sign(x: int) -> int:
    return (x > 0) - (x < 0)


def bowen_franks(A: Matrix) -> tuple[AbelianGroupPresentation, int]:
    """Bowen-Franks group cok(I - A) and the exact det(I - A)."""
    if any(len(row) != len(A) for row in A):
        raise InvariantError("matrix must be square")
    if any(x < 0 for row in A for x in row):
        raise InvariantError("adjacency matrix must be nonnegative")
    M = i_minus(A)
    return cokernel(M), det(M)


# ---------------------------------------------------------------- SFT flow equivalence

def _arcs(A: Matrix):
    return [(i, j) for i, row in enumerate(A) for j, x in enumerate(row) if x]


def check_irreducible(A: Matrix, name: str = "matrix") -> None:
    n = len(A)
    if n == 0:
        raise InvariantError(f"{name}: empty graph")
    arcs = _arcs(A)
    if graphs.essential_vertices(range(n), arcs) != set(range(n)):
        raise InvariantError(f"{name}: graph is not essential")
    pair = graphs.unreachable_pair(range(n), arcs)
    if pair is not None:
        raise InvariantError(f"{name}: graph is reducible ({pair[1]} not reachable from {pair[0]})")


def is_single_cycle(A: Matrix) -> bool:
    """Irreducible graph with one outgoing edge per vertex."""
    return all(sum(row) == 1 for row in A)


@dataclass(frozen=True)
class FlowVerdict:
    equivalent: bool
    reason: str
    left: tuple | None = None   # (group, det) of each side, when computed
    right: tuple | None = None


def sft_flow_equivalent(A: Matrix, B: Matrix) -> FlowVerdict:
    check_irreducible(A, "first")
    check_irreducible(B, "second")
    ca, cb = is_single_cycle(A), is_single_cycle(B)
    if ca and cb:
        return FlowVerdict(True, "both are single cycles")
    ia, ib = bowen_franks(A), bowen_franks(B)
    if ca != cb:
        return FlowVerdict(False, "exactly one is a single cycle", ia, ib)
    if ia[0] != ib[0]:
        return FlowVerdict(False, f"Bowen-Franks groups differ: {ia[0]} vs {ib[0]}", ia, ib)
    if sign(ia[1]) != sign(ib[1]):
        return FlowVerdict(False, f"det(I-A) signs differ: {ia[1]} vs {ib[1]}", ia, ib)
    return FlowVerdict(True, "Bowen-Franks groups and det(I-A) signs agree", ia, ib)


# ---------------------------------------------------------------- multiplicity graph

@dataclass(frozen=True)
class MultiplicityGraph:
    """Bipartite multigraph: preimage orbits (left) wound onto image orbits (right).

    ``right[j]`` is the length of image orbit j; ``left[i] = (j, w, length)``
    says preimage orbit i of that length maps onto image orbit j, winding w times.
    """
    right: tuple[int, ...]
    left: tuple[tuple[int, int, int], ...]
    labels: tuple[str, ...] = field(default=(), compare=False)  # diagnostic names of right vertices

    def weights(self, j: int) -> tuple[int, ...]:
        return tuple(sorted(w for t, w, _ in self.left if t == j))

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Isomorphism class: multiset of the winding numbers hanging off each image orbit."""
        return tuple(sorted(self.weights(j) for j in range(len(self.right))))

    def __str__(self) -> str:
        if not self.right:
            return "empty"
        return "; ".join("w=" + ",".join(map(str, ws)) for ws in self.canonical())


def _cycles_of_permutation_graph(g: TupleGraph) -> list[list]:
    """The simple cycles of a graph where every vertex has one in- and one out-edge."""
    out = {e[0]: e for e in g.edges}
    seen = set()
    cycles = []
    for v in sorted(g.vertices):
        if v in seen:
            continue
        path = []
        cur = v
        while cur not in seen:
            seen.add(cur)
            e = out[cur]
            path.append(e)
            cur = e[1]
        cycles.append(path)
    return cycles


def multiplicity_graph(cover: CoverLike, analysis=None) -> MultiplicityGraph:
    g, report = analysis if analysis is not None else analyze(cover)
    if not report.is_near_markov:
        raise InvariantError("multiplicity graph needs a near Markov cover")
    p = g.presentation
    right, left, labels = [], [], []
    for k in sorted(report.tuple_sizes):
        for cyc in _cycles_of_permutation_graph(g.component(k)):
            word = [e[2] for e in cyc]
            if shadowed(g, cyc[0][0], word):
                continue  # the point has more preimages; its own cycle sits higher up
            j = len(right)
            L = len(cyc)
            right.append(L)
            labels.append(render_tuple(cyc[0][0], p) + " " + "".join(e[2] for e in cyc))
            for c in cycle_weight(cyc, p).cycles():
                left.append((j, len(c), L * len(c)))
    return MultiplicityGraph(tuple(right), tuple(left), tuple(labels))


def multiplicity_graph_iso(g: MultiplicityGraph, h: MultiplicityGraph) -> bool:
    return g.canonical() == h.canonical()


# ---------------------------------------------------------------- near Markov triple

@dataclass(frozen=True)
class InvariantTriple:
    bf: AbelianGroupPresentation
    det: int
    mugraph: MultiplicityGraph

    def __str__(self) -> str:
        return f"({self.bf}, {self.det}, {self.mugraph})"


def _presentation(cover: CoverLike):
    return getattr(cover, "presentation", cover)


def near_markov_invariant(cover: CoverLike, name: str = "cover") -> InvariantTriple:
    g, report = analyze(cover)
    if not report.is_near_markov:
        if report.pet_witness:
            w = g.render(report.pet_witness)
        else:
            w = render_tuple(report.near_markov_witness, g.presentation)
        raise InvariantError(f"{name} is not near Markov (witness: {w})")
    bf, d = bowen_franks(_presentation(cover).adjacency())
    return InvariantTriple(bf, d, multiplicity_graph(cover, (g, report)))


def near_markov_fe(c1: CoverLike, c2: CoverLike) -> FlowVerdict:
    t1 = near_markov_invariant(c1, "first")
    t2 = near_markov_invariant(c2, "second")
    sft = sft_flow_equivalent(_presentation(c1).adjacency(), _presentation(c2).adjacency())
    if not sft.equivalent:
        return FlowVerdict(False, "covers not flow equivalent: " + sft.reason, t1, t2)
    if not multiplicity_graph_iso(t1.mugraph, t2.mugraph):
        return FlowVerdict(False, f"multiplicity graphs differ: {t1.mugraph} vs {t2.mugraph}", t1, t2)
    return FlowVerdict(True, "cover invariants and multiplicity graphs agree", t1, t2)
