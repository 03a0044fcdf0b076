"""The bunkbed graph G x K2 and its symmetric closure variables.

Vertex order is fixed: all minus copies in base order, then all plus copies.
Vertex ``i`` of the bunkbed graph is bit ``i`` of a cut bitmask.

Edge order is fixed too: minus horizontals (in base edge order), plus
horizontals, then verticals. Edge ``j`` is bit ``j`` of an edge bitmask.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Mapping

from bunkbed.graph import Graph, GraphError


class Sign(enum.Enum):
    MINUS = "-"
    PLUS = "+"


class EdgeClass(enum.Enum):
    MINUS_HORIZONTAL = "minus-horizontal"
    PLUS_HORIZONTAL = "plus-horizontal"
    VERTICAL = "vertical"


@total_ordering
@dataclass(frozen=True)
class BBVertex:
    base: int
    sign: Sign

    def __post_init__(self):
        if not isinstance(self.sign, Sign):
            object.__setattr__(self, "sign", Sign(self.sign))

    def __lt__(self, other):
        return (self.sign is Sign.PLUS, self.base) < (other.sign is Sign.PLUS, other.base)

    @property
    def name(self) -> str:
        return f"{self.base}{self.sign.value}"

    @classmethod
    def parse(cls, name: str) -> BBVertex:
        name = name.strip()
        if len(name) < 2 or name[-1] not in "+-":
            raise GraphError(f"bad bunkbed vertex name {name!r}; expected e.g. '3-' or '0+'")
        return cls(int(name[:-1]), Sign(name[-1]))

    def __repr__(self):
        return self.name


def minus(x: int) -> BBVertex:
    return BBVertex(x, Sign.MINUS)


def plus(x: int) -> BBVertex:
    return BBVertex(x, Sign.PLUS)


@dataclass(frozen=True)
class BBEdge:
    endpoints: tuple[BBVertex, BBVertex]
    edge_class: EdgeClass

    def __post_init__(self):
        a, b = self.endpoints
        object.__setattr__(self, "endpoints", (a, b) if a < b else (b, a))

    @property
    def name(self) -> str:
        a, b = self.endpoints
        return f"{a.name}{b.name}"

    def __repr__(self):
        return self.name


@total_ordering
@dataclass(frozen=True)
class VariableId:
    """Closure variable: ``H`` for a base edge (shared by both layers) or
    ``V`` for the vertical edge at a base vertex."""

    kind: str
    ends: tuple[int, ...]

    def __post_init__(self):
        if self.kind == "V" and len(self.ends) != 1:
            raise ValueError("V variables take one vertex")
        if self.kind == "H":
            if len(self.ends) != 2:
                raise ValueError("H variables take an edge")
            object.__setattr__(self, "ends", tuple(sorted(self.ends)))
        if self.kind not in ("V", "H"):
            raise ValueError(f"unknown variable kind {self.kind!r}")

    @classmethod
    def V(cls, x: int) -> VariableId:
        return cls("V", (x,))

    @classmethod
    def H(cls, x: int, y: int) -> VariableId:
        return cls("H", (x, y))

    def sort_key(self):
        return (self.kind != "V", self.ends)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    @property
    def name(self) -> str:
        return f"{self.kind}({','.join(map(str, self.ends))})"

    @classmethod
    def parse(cls, name: str) -> VariableId:
        name = name.strip()
        if len(name) < 4 or name[1] != "(" or name[-1] != ")":
            raise ValueError(f"bad variable name {name!r}")
        return cls(name[0], tuple(int(t) for t in name[2:-1].split(",")))

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class BunkbedGraph:
    base: Graph
    vertices: tuple[BBVertex, ...]
    edges: tuple[BBEdge, ...]

    @property
    def n(self) -> int:
        return self.base.vertex_count

    @property
    def m(self) -> int:
        """Number of base edges."""
        return len(self.base.edges)

    @cached_property
    def base_edges(self) -> list[tuple[int, int]]:
        return self.base.edge_list

    @cached_property
    def vertex_bit(self) -> dict[BBVertex, int]:
        return {w: i for i, w in enumerate(self.vertices)}

    @cached_property
    def edge_bit(self) -> dict[BBEdge, int]:
        return {e: j for j, e in enumerate(self.edges)}

    @cached_property
    def edge_ends(self) -> list[tuple[int, int]]:
        """Vertex bit positions of the endpoints of each edge, in edge order."""
        return [tuple(self.vertex_bit[w] for w in e.endpoints) for e in self.edges]

    @cached_property
    def variables(self) -> tuple[VariableId, ...]:
        """All closure variables in canonical order: V before H, then by index."""
        return tuple(VariableId.V(x) for x in range(self.n)) + tuple(
            VariableId.H(x, y) for x, y in self.base_edges
        )

    @cached_property
    def _variable_of_bit(self) -> list[VariableId]:
        m, n = self.m, self.n
        out = [VariableId.H(*self.base_edges[j % m]) for j in range(2 * m)]
        out += [VariableId.V(x) for x in range(n)]
        return out

    def variable_of_bit(self, j: int) -> VariableId:
        return self._variable_of_bit[j]

    def variable_of_edge(self, e: BBEdge) -> VariableId:
        try:
            return self._variable_of_bit[self.edge_bit[e]]
        except KeyError:
            raise GraphError(f"edge {e!r} is not in the bunkbed graph") from None

    def vertex_mask(self, members) -> int:
        mask = 0
        for w in members:
            try:
                mask |= 1 << self.vertex_bit[w]
            except KeyError:
                raise GraphError(f"vertex {w!r} is not in the bunkbed graph") from None
        return mask

    def edge(self, a: BBVertex, b: BBVertex) -> BBEdge:
        for e in self.edges:
            if set(e.endpoints) == {a, b}:
                return e
        raise GraphError(f"no edge {a!r}{b!r}")

    def to_json(self) -> dict:
        return {
            "base": {"vertex_count": self.n, "edges": [list(e) for e in self.base_edges]},
            "vertices": [w.name for w in self.vertices],
            "edges": [
                {"ends": [w.name for w in e.endpoints], "class": e.edge_class.value,
                 "variable": self.variable_of_edge(e).name}
                for e in self.edges
            ],
            "variables": [v.name for v in self.variables],
        }

    @classmethod
    def from_json(cls, data: dict) -> BunkbedGraph:
        base = data["base"]
        return build_bunkbed(Graph(base["vertex_count"], frozenset(tuple(e) for e in base["edges"])))


def build_bunkbed(g: Graph) -> BunkbedGraph:
    vertices = tuple(minus(x) for x in g.vertices) + tuple(plus(x) for x in g.vertices)
    base_edges = g.edge_list
    edges = (
        tuple(BBEdge((minus(x), minus(y)), EdgeClass.MINUS_HORIZONTAL) for x, y in base_edges)
        + tuple(BBEdge((plus(x), plus(y)), EdgeClass.PLUS_HORIZONTAL) for x, y in base_edges)
        + tuple(BBEdge((minus(x), plus(x)), EdgeClass.VERTICAL) for x in g.vertices)
    )
    return BunkbedGraph(g, vertices, edges)


def _as_probability(value) -> Fraction:
    q = Fraction(value)
    if not 0 <= q <= 1:
        raise ValueError(f"closure probability {value} outside [0, 1]")
    return q


@dataclass(frozen=True)
class SymmetricAssignment:
    """Closure probabilities q = 1 - p, one per closure variable.

    Symmetry is structural: both horizontal copies of a base edge read the
    same H variable, so an asymmetric assignment cannot be expressed.
    """

    q_values: Mapping[VariableId, Fraction]

    def __post_init__(self):
        object.__setattr__(
            self, "q_values", {k: _as_probability(v) for k, v in sorted(self.q_values.items())}
        )

    def covering(self, bb: BunkbedGraph) -> SymmetricAssignment:
        missing = [v for v in bb.variables if v not in self.q_values]
        if missing:
            raise ValueError(f"assignment lacks variables {missing}")
        return self

    def q(self, var: VariableId) -> Fraction:
        return self.q_values[var]

    def p(self, var: VariableId) -> Fraction:
        return 1 - self.q_values[var]

    def edge_q(self, bb: BunkbedGraph) -> list[Fraction]:
        """Closure probability of every bunkbed edge, in edge order."""
        self.covering(bb)
        return [self.q_values[bb.variable_of_bit(j)] for j in range(len(bb.edges))]

    def to_json(self) -> dict:
        return {"q": {k.name: str(v) for k, v in self.q_values.items()}}

    @classmethod
    def from_json(cls, data: dict) -> SymmetricAssignment:
        return cls({VariableId.parse(k): Fraction(v) for k, v in data["q"].items()})


def uniform_assignment(bb: BunkbedGraph, q) -> SymmetricAssignment:
    q = _as_probability(q)
    return SymmetricAssignment({v: q for v in bb.variables})
