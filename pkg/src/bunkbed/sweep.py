"""Exhaustive sweeps over small graphs, one representative per isomorphism class."""

from __future__ import annotations

from itertools import permutations
from typing import Iterator

import networkx as nx

from bunkbed.graph import Graph

ATLAS_MAX_VERTICES = 7


def small_graphs(max_vertices: int, min_vertices: int = 1, connected: bool = False) -> list[Graph]:
    """All graphs on min..max vertices up to isomorphism (networkx graph atlas order)."""
    if max_vertices > ATLAS_MAX_VERTICES:
        raise ValueError(f"the graph atlas stops at {ATLAS_MAX_VERTICES} vertices")
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if not min_vertices <= k <= max_vertices:
            continue
        if connected and not nx.is_connected(h):
            continue
        out.append(Graph(k, frozenset(tuple(sorted(e)) for e in h.edges())))
    return out


def ordered_pairs(g: Graph) -> Iterator[tuple[int, int]]:
    for u in g.vertices:
        for v in g.vertices:
            if u != v:
                yield u, v


def rooted_canonical_form(g: Graph, u: int, v: int) -> tuple:
    """Isomorphism-invariant key of (G, u, v); brute force, fine for n <= 7."""
    best = None
    for perm in permutations(range(g.vertex_count)):
        if perm[u] != 0 or perm[v] != 1:
            continue
        key = tuple(sorted(tuple(sorted((perm[x], perm[y]))) for x, y in g.edges))
        if best is None or key < best:
            best = key
    return (g.vertex_count, best)


def rooted_pairs(g: Graph) -> Iterator[tuple[int, int]]:
    """One ordered (u, v) per orbit of the automorphism group of g."""
    seen = set()
    for u, v in ordered_pairs(g):
        key = rooted_canonical_form(g, u, v)
        if key not in seen:
            seen.add(key)
            yield u, v


def label(g: Graph) -> str:
    return f"n={g.vertex_count} edges={g.edge_list}"
