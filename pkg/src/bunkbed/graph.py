"""Finite simple graphs on dense integer vertex ids."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class GraphError(ValueError):
    """Invalid graph input or out-of-range vertex."""


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        normalized = set()
        for x, y in self.edges:
            if x == y:
                raise GraphError(f"self-loop at vertex {x}")
            for z in (x, y):
                if not 0 <= z < self.vertex_count:
                    raise GraphError(f"vertex {z} out of range [0, {self.vertex_count})")
            normalized.add((min(x, y), max(x, y)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertex_count: int | None = None) -> Graph:
        edges = list(edges)
        if vertex_count is None:
            vertex_count = 1 + max((max(e) for e in edges), default=-1)
        return cls(vertex_count, frozenset(edges))

    @classmethod
    def path(cls, n: int) -> Graph:
        """The path P_n with n edges (n + 1 vertices)."""
        return cls(n + 1, frozenset((i, i + 1) for i in range(n)))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        """Edges in canonical (sorted) order; indices into this list are edge ids."""
        return sorted(self.edges)

    def neighbours(self, x: int) -> list[int]:
        self.check_vertex(x)
        return sorted(y for e in self.edges if x in e for y in e if y != x)

    def check_vertex(self, x: int) -> None:
        if not 0 <= x < self.vertex_count:
            raise GraphError(f"vertex {x} out of range [0, {self.vertex_count})")

    def to_edge_list_text(self) -> str:
        lines = [f"n {self.vertex_count}"]
        lines += [f"{x} {y}" for x, y in self.edge_list]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return f"Graph(n={self.vertex_count}, edges={self.edge_list})"


def parse_edge_list(text: str) -> Graph:
    """Parse ``x y`` lines into a Graph.

    Blank lines and ``#`` comments are skipped. A header ``n <count>`` declares
    the vertex count, which allows isolated vertices; otherwise the count is
    one more than the largest label.
    """
    declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 2 and parts[0] == "n":
            try:
                declared = int(parts[1])
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if declared < 0:
                raise GraphError(f"line {lineno}: negative vertex count")
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'x y', got {line!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex label in {line!r}") from None
        if x < 0 or y < 0:
            raise GraphError(f"line {lineno}: negative vertex label")
        if x == y:
            raise GraphError(f"line {lineno}: self-loop at vertex {x}")
        edges.append((x, y))
    n = 1 + max((max(e) for e in edges), default=-1)
    if declared is not None:
        if declared < n:
            raise GraphError(f"header declares {declared} vertices but label {n - 1} is used")
        n = declared
    return Graph(n, frozenset(edges))


def components_within(g: Graph, s: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of the induced subgraph g[s], ordered by least vertex."""
    s = set(s)
    for x in s:
        g.check_vertex(x)
    adj = {x: [] for x in s}
    for x, y in g.edges:
        if x in s and y in s:
            adj[x].append(y)
            adj[y].append(x)
    seen = set()
    blocks = []
    for start in sorted(s):
        if start in seen:
            continue
        block = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in block:
                    block.add(y)
                    stack.append(y)
        seen |= block
        blocks.append(frozenset(block))
    return blocks


def same_component(g: Graph, s: Iterable[int], a: int, b: int) -> bool:
    s = set(s)
    if a not in s or b not in s:
        raise GraphError(f"vertices {a}, {b} must both lie in the subset")
    return any(a in block and b in block for block in components_within(g, s))


def adjacency_masks(g: Graph) -> list[int]:
    """Neighbourhood of each vertex as a bitmask."""
    adj = [0] * g.vertex_count
    for x, y in g.edges:
        adj[x] |= 1 << y
        adj[y] |= 1 << x
    return adj


def component_of(adj: list[int], subset: int, start: int) -> int:
    """Bitmask of the component of ``start`` in the subgraph induced by ``subset``."""
    if not subset >> start & 1:
        return 0
    comp = frontier = 1 << start
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            grow |= adj[low.bit_length() - 1]
            f ^= low
        frontier = grow & subset & ~comp
        comp |= frontier
    return comp


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """g[keep] relabelled 0..k-1 in increasing order, with the old -> new map."""
    relabel = {x: i for i, x in enumerate(sorted(set(keep)))}
    for x in relabel:
        g.check_vertex(x)
    edges = [(relabel[x], relabel[y]) for x, y in g.edges if x in relabel and y in relabel]
    return Graph.from_edges(edges, vertex_count=len(relabel)), relabel


def has_stray_component(g: Graph, u: int, v: int) -> bool:
    """True when u, v share a component and some other component of g exists."""
    blocks = components_within(g, g.vertices)
    home = next(b for b in blocks if u in b)
    return v in home and len(blocks) > 1
