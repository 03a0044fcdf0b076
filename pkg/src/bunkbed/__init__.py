"""Exact cut-based computations on bunkbed graphs in the p -> 1 regime."""

from bunkbed.graph import Graph, GraphError, parse_edge_list, components_within, same_component
from bunkbed.bunkbed import (
    Sign,
    EdgeClass,
    BBVertex,
    BBEdge,
    VariableId,
    BunkbedGraph,
    SymmetricAssignment,
    build_bunkbed,
    uniform_assignment,
)
from bunkbed.cuts import Cut, CutFamily, Side, enumerate_family
from bunkbed.poly import Monomial, Polynomial, event_monomial, strictly_divides

__all__ = [
    "Graph",
    "GraphError",
    "parse_edge_list",
    "components_within",
    "same_component",
    "Sign",
    "EdgeClass",
    "BBVertex",
    "BBEdge",
    "VariableId",
    "BunkbedGraph",
    "SymmetricAssignment",
    "build_bunkbed",
    "uniform_assignment",
    "Cut",
    "CutFamily",
    "Side",
    "enumerate_family",
    "Monomial",
    "Polynomial",
    "event_monomial",
    "strictly_divides",
]
