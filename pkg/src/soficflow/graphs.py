"""Small directed-graph helpers shared by the analysis modules."""
from __future__ import annotations

from typing import Hashable, Iterable

import networkx as nx


def digraph(vertices: Iterable[Hashable], arcs: Iterable[tuple]) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(vertices)
    g.add_edges_from((u, v) for u, v, *_ in arcs)
    return g


def essential_vertices(vertices: Iterable[Hashable], arcs: Iterable[tuple]) -> set:
    """Vertices surviving repeated removal of sources and sinks.

    Equivalently, vertices lying on a bi-infinite path.
    """
    arcs = [(u, v) for u, v, *_ in arcs]
    alive = set(vertices)
    while True:
        has_out = {u for u, v in arcs if u in alive and v in alive}
        has_in = {v for u, v in arcs if u in alive and v in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            return alive
        alive = keep


def unreachable_pair(vertices: Iterable[Hashable], arcs: Iterable[tuple]):
    """Some ``(u, v)`` with ``v`` not reachable from ``u``, or None if strongly connected."""
    g = digraph(vertices, arcs)
    nodes = list(g.nodes)
    if not nodes:
        return None
    root = nodes[0]
    forward = nx.descendants(g, root) | {root}
    for v in nodes:
        if v not in forward:
            return (root, v)
    backward = nx.ancestors(g, root) | {root}
    for v in nodes:
        if v not in backward:
            return (v, root)
    return None


def strong_components(vertices: Iterable[Hashable], arcs: Iterable[tuple]) -> list[set]:
    """Strongly connected components that carry at least one cycle."""
    g = digraph(vertices, arcs)
    out = []
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(v, v) for v in comp):
            out.append(set(comp))
    return out


def forward_closure(sources: Iterable[Hashable], arcs: Iterable[tuple]) -> set:
    succ: dict = {}
    for u, v, *_ in arcs:
        succ.setdefault(u, []).append(v)
    seen = set(sources)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def backward_infinite(vertices: Iterable[Hashable], arcs: Iterable[tuple]) -> set:
    """Vertices at the end of arbitrarily long (hence left-infinite) paths."""
    arcs = [(u, v) for u, v, *_ in arcs]
    alive = set(vertices)
    while True:
        keep = {v for u, v in arcs if u in alive and v in alive}
        if keep == alive:
            return alive
        alive = keep


def forward_infinite(vertices: Iterable[Hashable], arcs: Iterable[tuple]) -> set:
    """Vertices at the start of arbitrarily long paths."""
    return backward_infinite(vertices, [(v, u) for u, v, *_ in arcs])


def labeled_shift_included(g_arcs: Iterable[tuple], h_vertices: Iterable[Hashable],
                           h_arcs: Iterable[tuple]) -> bool:
    """Is every label word of the essential labeled graph ``g`` a label word of ``h``?

    Arcs are ``(u, v, label)``.  Reads words of ``g`` while tracking the set of
    ``h`` states reachable along the same word from anywhere; ``h`` must be
    essential for the answer to concern the shifts rather than finite words.
    """
    h_step: dict = {}
    for u, v, a in h_arcs:
        h_step.setdefault((u, a), set()).add(v)
    g_out: dict = {}
    for u, v, a in g_arcs:
        g_out.setdefault(u, []).append((v, a))
    everything = frozenset(h_vertices)
    start = [(u, everything) for u in g_out]
    seen = set(start)
    stack = list(start)
    while stack:
        u, U = stack.pop()
        for v, a in g_out[u]:
            V = frozenset(t for s in U for t in h_step.get((s, a), ()))
            if not V:
                return False
            if (v, V) not in seen:
                seen.add((v, V))
                stack.append((v, V))
    return True
