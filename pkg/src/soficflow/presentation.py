"""Labeled-graph presentations of sofic shifts.

A presentation is a finite directed multigraph whose edges carry symbols.
States keep the user's tokens; internal indices follow declaration order,
and everything downstream (tuple ordering, skew permutations) is expressed
in those indices.

Text format::

    # comment
    states: 1 2 3
    matrix:
    a+f | 0 | c
    0   | a | b
    d   | b | a

An entry is ``0`` (no edge) or ``sym(+sym)*``; ``a+a`` is two parallel
edges.  Since ``0`` is reserved inside the matrix, a presentation that uses
``0`` as a symbol is written with an ``edges:`` section instead, one
``source target symbol`` triple per line.
"""
from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from soficflow import graphs

TOKEN = re.compile(r"^[A-Za-z0-9_*]+$")
STAR = "*"


class PresentationError(ValueError):
    """Raised for malformed input or violated preconditions."""


class ParseError(PresentationError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Edge(NamedTuple):
    src: int
    dst: int
    label: str


def natural_key(token: str):
    return [(0, int(part), "") if part.isdigit() else (1, 0, part)
            for part in re.split(r"(\d+)", token) if part != ""]


@dataclass(frozen=True)
class SymbolicPresentation:
    """States, labeled edges and the alphabet they use.

    ``edges`` index into ``states``.  ``alphabet`` defaults to the set of
    labels actually used.
    """

    states: tuple[str, ...]
    edges: tuple[Edge, ...]
    alphabet: frozenset[str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", frozenset(e.label for e in self.edges))
        else:
            object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        if len(set(self.states)) != len(self.states):
            raise PresentationError("duplicate state name")
        n = len(self.states)
        for e in self.edges:
            if not (0 <= e.src < n and 0 <= e.dst < n):
                raise PresentationError(f"edge {e} has an undeclared endpoint")
            if e.label not in self.alphabet:
                raise PresentationError(f"edge label {e.label!r} not in alphabet")

    @classmethod
    def from_named_edges(cls, states: Iterable[str],
                         edges: Iterable[tuple[str, str, str]]) -> "SymbolicPresentation":
        states = tuple(states)
        index = {s: i for i, s in enumerate(states)}
        return cls(states, tuple(Edge(index[u], index[v], a) for u, v, a in edges))

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, name: str) -> int:
        return self.states.index(name)

    def out_edges(self, i: int) -> list[Edge]:
        return [e for e in self.edges if e.src == i]

    def in_edges(self, i: int) -> list[Edge]:
        return [e for e in self.edges if e.dst == i]

    def transitions(self) -> dict[tuple[int, str], list[int]]:
        """``(state, symbol) -> targets`` in edge order."""
        out: dict[tuple[int, str], list[int]] = defaultdict(list)
        for e in self.edges:
            out[e.src, e.label].append(e.dst)
        return dict(out)

    def step(self, subset: Iterable[int], label: str) -> frozenset[int]:
        """Terminal states of ``label`` edges leaving ``subset``."""
        subset = set(subset)
        return frozenset(e.dst for e in self.edges if e.src in subset and e.label == label)

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.n for _ in range(self.n)]
        for e in self.edges:
            A[e.src][e.dst] += 1
        return A

    def label_matrix(self) -> list[list[Counter]]:
        M = [[Counter() for _ in range(self.n)] for _ in range(self.n)]
        for e in self.edges:
            M[e.src][e.dst][e.label] += 1
        return M

    def is_right_resolving(self) -> bool:
        seen = set()
        for e in self.edges:
            if (e.src, e.label) in seen:
                return False
            seen.add((e.src, e.label))
        return True

    def relabel_states(self, order: list[int]) -> "SymbolicPresentation":
        """Reorder states so that new state ``k`` is old state ``order[k]``."""
        new_index = {old: new for new, old in enumerate(order)}
        return SymbolicPresentation(
            tuple(self.states[i] for i in order),
            tuple(Edge(new_index[e.src], new_index[e.dst], e.label) for e in self.edges),
            self.alphabet,
        )

    def induced(self, keep: Iterable[int]) -> "SymbolicPresentation":
        """Subgraph on ``keep`` (declaration order preserved)."""
        keep = sorted(set(keep))
        new_index = {old: new for new, old in enumerate(keep)}
        edges = tuple(Edge(new_index[e.src], new_index[e.dst], e.label)
                      for e in self.edges if e.src in new_index and e.dst in new_index)
        return SymbolicPresentation(tuple(self.states[i] for i in keep), edges)

    def canonical(self) -> "SymbolicPresentation":
        """States in natural sort order, edges sorted."""
        order = sorted(range(self.n), key=lambda i: natural_key(self.states[i]))
        p = self.relabel_states(order)
        edges = sorted(p.edges, key=lambda e: (e.src, e.dst, natural_key(e.label)))
        return SymbolicPresentation(p.states, tuple(edges), p.alphabet)


# ---------------------------------------------------------------- parsing

def _tokens_with_columns(text: str):
    for m in re.finditer(r"\S+", text):
        yield m.group(), m.start() + 1


def parse(text: str) -> SymbolicPresentation:
    """Parse the text format described in the module docstring."""
    states: list[str] | None = None
    section = None
    rows: list[tuple[int, str]] = []
    edge_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("states:"):
            if states is not None:
                raise ParseError("repeated 'states:' header", lineno)
            states = []
            offset = line.index("states:") + len("states:")
            for tok, col in _tokens_with_columns(line[offset:]):
                if not TOKEN.match(tok):
                    raise ParseError(f"bad state name {tok!r}", lineno, offset + col)
                if tok in states:
                    raise ParseError(f"duplicate state name {tok!r}", lineno, offset + col)
                states.append(tok)
            continue
        if stripped in ("matrix:", "edges:"):
            if section is not None:
                raise ParseError("only one of 'matrix:' or 'edges:' allowed", lineno)
            section = stripped[:-1]
            continue
        if section == "matrix":
            rows.append((lineno, line))
        elif section == "edges":
            edge_lines.append((lineno, line))
        else:
            raise ParseError(f"unexpected content {stripped!r}", lineno, line.index(stripped) + 1)
    if states is None:
        raise ParseError("missing 'states:' header", 1)
    if section is None:
        raise ParseError("missing 'matrix:' or 'edges:' section", 1)
    if section == "matrix":
        return _parse_matrix(states, rows)
    return _parse_edges(states, edge_lines)


def _parse_matrix(states: list[str], rows: list[tuple[int, str]]) -> SymbolicPresentation:
    n = len(states)
    if len(rows) != n:
        line = rows[-1][0] if rows else 1
        raise ParseError(f"expected {n} matrix rows, found {len(rows)}", line)
    edges = []
    for i, (lineno, line) in enumerate(rows):
        cells = line.split("|")
        if len(cells) != n:
            raise ParseError(f"expected {n} entries, found {len(cells)}", lineno)
        col = 1
        for j, cell in enumerate(cells):
            entry = cell.strip()
            entry_col = col + (len(cell) - len(cell.lstrip()))
            col += len(cell) + 1
            if entry == "0":
                continue
            if not entry:
                raise ParseError("empty matrix entry", lineno, entry_col)
            for term in entry.split("+"):
                term = term.strip()
                if term == "0":
                    raise ParseError("symbol '0' may only stand alone as an entry",
                                     lineno, entry_col)
                if not TOKEN.match(term):
                    raise ParseError(f"bad symbol {term!r}", lineno, entry_col)
                edges.append(Edge(i, j, term))
    return SymbolicPresentation(tuple(states), tuple(edges))


def _parse_edges(states: list[str], lines: list[tuple[int, str]]) -> SymbolicPresentation:
    index = {s: i for i, s in enumerate(states)}
    edges = []
    for lineno, line in lines:
        toks = list(_tokens_with_columns(line))
        if len(toks) != 3:
            raise ParseError("expected 'source target symbol'", lineno)
        (u, cu), (v, cv), (a, ca) = toks
        for name, col in ((u, cu), (v, cv)):
            if name not in index:
                raise ParseError(f"undeclared state {name!r}", lineno, col)
        if not TOKEN.match(a):
            raise ParseError(f"bad symbol {a!r}", lineno, ca)
        edges.append(Edge(index[u], index[v], a))
    return SymbolicPresentation(tuple(states), tuple(edges))


def render(p: SymbolicPresentation) -> str:
    """Canonical text: states and symbols in natural order."""
    p = p.canonical()
    lines = ["states: " + " ".join(p.states)]
    if "0" in p.alphabet:
        lines.append("edges:")
        for e in p.edges:
            lines.append(f"{p.states[e.src]} {p.states[e.dst]} {e.label}")
    else:
        lines.append("matrix:")
        M = p.label_matrix()
        cells = [["+".join(sorted(M[i][j].elements(), key=natural_key)) or "0"
                  for j in range(p.n)] for i in range(p.n)]
        width = max((len(c) for row in cells for c in row), default=1)
        for row in cells:
            lines.append(" | ".join(c.ljust(width) for c in row).rstrip())
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- validation

@dataclass(frozen=True)
class ValidationReport:
    is_essential: bool
    is_irreducible: bool
    is_right_resolving: bool
    is_follower_separated: bool
    # witnesses are state names / (state, symbol) / state pairs; None when the flag holds
    nonessential_state: str | None = None
    unreachable_pair: tuple[str, str] | None = None
    label_collision: tuple[str, str] | None = None
    equivalent_states: tuple[str, str] | None = None

    @property
    def ok(self) -> bool:
        return (self.is_essential and self.is_irreducible
                and self.is_right_resolving and self.is_follower_separated)

    def failures(self) -> list[str]:
        out = []
        if not self.is_essential:
            out.append(f"not essential: state {self.nonessential_state}")
        if not self.is_irreducible:
            u, v = self.unreachable_pair
            out.append(f"not irreducible: {v} unreachable from {u}")
        if not self.is_right_resolving:
            s, a = self.label_collision
            out.append(f"not right-resolving: state {s} has two {a}-edges")
        if not self.is_follower_separated:
            s, t = self.equivalent_states
            out.append(f"not follower-separated: {s} and {t} have equal follower sets")
        return out


def validate(p: SymbolicPresentation) -> ValidationReport:
    witness: dict = {}
    has_in = {e.dst for e in p.edges}
    has_out = {e.src for e in p.edges}
    bad = [i for i in range(p.n) if i not in has_in or i not in has_out]
    if bad:
        witness["nonessential_state"] = p.states[bad[0]]

    pair = graphs.unreachable_pair(range(p.n), [(e.src, e.dst) for e in p.edges])
    if pair is not None:
        witness["unreachable_pair"] = (p.states[pair[0]], p.states[pair[1]])

    seen = set()
    for e in p.edges:
        if (e.src, e.label) in seen:
            witness["label_collision"] = (p.states[e.src], e.label)
            break
        seen.add((e.src, e.label))

    classes = follower_classes(p)
    for cls in classes:
        if len(cls) > 1:
            s, t = sorted(cls)[:2]
            witness["equivalent_states"] = (p.states[s], p.states[t])
            break

    return ValidationReport(
        is_essential=not bad,
        is_irreducible=pair is None,
        is_right_resolving="label_collision" not in witness,
        is_follower_separated="equivalent_states" not in witness,
        **witness,
    )


def refine_partition(states: list, alphabet: Iterable[str], delta: dict) -> dict:
    """Moore refinement for a partial DFA in which every state accepts.

    ``delta`` maps ``(state, symbol) -> state``.  Returns ``state -> block id``;
    equal ids mean equal follower languages.
    """
    alphabet = sorted(alphabet)
    block = {s: frozenset(a for a in alphabet if (s, a) in delta) for s in states}
    ids = {sig: k for k, sig in enumerate(sorted(set(block.values()), key=sorted))}
    block = {s: ids[block[s]] for s in states}
    while True:
        sig = {s: (block[s],) + tuple(block[delta[s, a]] if (s, a) in delta else -1
                                      for a in alphabet)
               for s in states}
        ids = {v: k for k, v in enumerate(sorted(set(sig.values())))}
        new = {s: ids[sig[s]] for s in states}
        if len(set(new.values())) == len(set(block.values())):
            return new
        block = new


def follower_classes(p: SymbolicPresentation) -> list[frozenset[int]]:
    """States grouped by follower set (works for any presentation)."""
    if p.is_right_resolving():
        delta = {(e.src, e.label): e.dst for e in p.edges}
        blocks = refine_partition(list(range(p.n)), p.alphabet, delta)
        groups: dict[int, set[int]] = defaultdict(set)
        for s, b in blocks.items():
            groups[b].add(s)
        return sorted((frozenset(g) for g in groups.values()), key=min)
    # determinize from every singleton, then compare the singleton classes
    start = [frozenset([i]) for i in range(p.n)]
    subsets, delta = subset_automaton(p, start)
    blocks = refine_partition(subsets, p.alphabet, delta)
    groups = defaultdict(set)
    for i in range(p.n):
        groups[blocks[frozenset([i])]].add(i)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def subset_automaton(p: SymbolicPresentation, start: Iterable[frozenset[int]]):
    """Nonempty subsets reachable from ``start`` and their transitions."""
    alphabet = sorted(p.alphabet, key=natural_key)
    trans = p.transitions()
    seen = list(dict.fromkeys(start))
    known = set(seen)
    delta = {}
    queue = list(seen)
    while queue:
        U = queue.pop(0)
        for a in alphabet:
            V = frozenset(t for s in U for t in trans.get((s, a), ()))
            if not V:
                continue
            delta[U, a] = V
            if V not in known:
                known.add(V)
                seen.append(V)
                queue.append(V)
    return seen, delta


# -------------------------------------------------------- transformations

def trim(p: SymbolicPresentation) -> SymbolicPresentation:
    """Largest subgraph in which every state has an incoming and an outgoing edge."""
    keep = graphs.essential_vertices(range(p.n), [(e.src, e.dst) for e in p.edges])
    q = p.induced(keep)
    return SymbolicPresentation(q.states, q.edges, p.alphabet if q.edges else frozenset())


def expansion_symbol(p: SymbolicPresentation, a: str) -> str:
    star = STAR + a
    while star in p.alphabet:
        star = STAR + star
    return star


def symbol_expand(p: SymbolicPresentation, a: str) -> SymbolicPresentation:
    """Replace ``a`` by ``a *a`` on a right-resolving presentation.

    Each state ``v`` entered by an ``a``-edge gets a companion ``v_a``; the
    ``a``-edges now end at ``v_a`` and a single ``*a``-edge runs ``v_a -> v``.
    """
    if a not in p.alphabet:
        raise PresentationError(f"symbol {a!r} not in alphabet")
    if not p.is_right_resolving():
        raise PresentationError("symbol expansion needs a right-resolving presentation")
    star = expansion_symbol(p, a)
    targets = sorted({e.dst for e in p.edges if e.label == a})
    names = list(p.states)
    taken = set(names)
    companion = {}
    for v in targets:
        name = f"{p.states[v]}_{a}"
        k = 2
        while name in taken:
            name = f"{p.states[v]}_{a}_{k}"
            k += 1
        taken.add(name)
        companion[v] = len(names)
        names.append(name)
    edges = []
    for e in p.edges:
        if e.label == a:
            edges.append(Edge(e.src, companion[e.dst], a))
        else:
            edges.append(e)
    for v in targets:
        edges.append(Edge(companion[v], v, star))
    return SymbolicPresentation(tuple(names), tuple(edges), p.alphabet | {star})


def subdivide(p: SymbolicPresentation, a: str) -> SymbolicPresentation:
    """Replace ``a`` by ``a *a`` edge by edge; works for any presentation.

    Every ``a``-edge ``u -> v`` becomes ``u -> m -> v`` through a fresh state
    ``m``.  Presents the same expanded shift as ``symbol_expand`` but is
    rarely right-resolving.
    """
    if a not in p.alphabet:
        raise PresentationError(f"symbol {a!r} not in alphabet")
    star = expansion_symbol(p, a)
    names = list(p.states)
    edges = []
    for n, e in enumerate(p.edges):
        if e.label != a:
            edges.append(e)
            continue
        m = len(names)
        names.append(f"{p.states[e.src]}_{p.states[e.dst]}_{a}_{n}")
        edges += [Edge(e.src, m, a), Edge(m, e.dst, star)]
    return SymbolicPresentation(tuple(names), tuple(edges), p.alphabet | {star})


def reverse(p: SymbolicPresentation) -> SymbolicPresentation:
    return SymbolicPresentation(p.states, tuple(Edge(e.dst, e.src, e.label) for e in p.edges),
                                p.alphabet)


# ------------------------------------------------------------ isomorphism

def _bfs_code(p: SymbolicPresentation, start: int):
    """Deterministic renumbering from ``start`` (right-resolving input)."""
    trans = {(e.src, e.label): e.dst for e in p.edges}
    labels = sorted(p.alphabet)
    order = {start: 0}
    queue = [start]
    code = []
    while queue:
        s = queue.pop(0)
        row = []
        for a in labels:
            t = trans.get((s, a))
            if t is None:
                continue
            if t not in order:
                order[t] = len(order)
                queue.append(t)
            row.append((a, order[t]))
        code.append(tuple(row))
    if len(order) != p.n:
        return None
    return tuple(code)


def canonical_code(p: SymbolicPresentation):
    """Isomorphism-invariant code of a right-resolving, strongly connected presentation."""
    codes = [c for c in (_bfs_code(p, s) for s in range(p.n)) if c is not None]
    if not codes:
        return None
    return (p.n, min(codes))


def isomorphic(p: SymbolicPresentation, q: SymbolicPresentation) -> bool:
    """Labeled-graph isomorphism (label-preserving bijection on states)."""
    if p.n != q.n or Counter(e.label for e in p.edges) != Counter(e.label for e in q.edges):
        return False
    if p.n == 0:
        return True
    if p.is_right_resolving() and q.is_right_resolving():
        cp, cq = canonical_code(p), canonical_code(q)
        if cp is not None and cq is not None:
            return cp == cq
    return _isomorphic_backtrack(p, q)


def _isomorphic_backtrack(p: SymbolicPresentation, q: SymbolicPresentation) -> bool:
    def signature(r: SymbolicPresentation, i: int):
        return (tuple(sorted(Counter(e.label for e in r.out_edges(i)).items())),
                tuple(sorted(Counter(e.label for e in r.in_edges(i)).items())))

    sp = [signature(p, i) for i in range(p.n)]
    sq = [signature(q, i) for i in range(q.n)]
    if sorted(sp) != sorted(sq):
        return False
    P = p.label_matrix()
    Q = q.label_matrix()
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(i: int, j: int) -> bool:
        if P[i][i] != Q[j][j]:
            return False
        for a, b in mapping.items():
            if P[i][a] != Q[j][b] or P[a][i] != Q[b][j]:
                return False
        return True

    def extend(i: int) -> bool:
        if i == p.n:
            return True
        for j in range(q.n):
            if j in used or sp[i] != sq[j] or not consistent(i, j):
                continue
            mapping[i] = j
            used.add(j)
            if extend(i + 1):
                return True
            del mapping[i]
            used.discard(j)
        return False

    return extend(0)
