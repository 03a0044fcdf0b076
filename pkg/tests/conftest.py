from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bunkbed import Graph, build_bunkbed
from bunkbed.bunkbed import VariableId


@pytest.fixture
def k2():
    return build_bunkbed(Graph.complete(2))


@pytest.fixture
def p2():
    return build_bunkbed(Graph.path(2))


def brute_boundary(bb, members):
    """Edges with exactly one endpoint in the vertex set, straight from the definition."""
    members = set(members)
    return {e for e in bb.edges if (e.endpoints[0] in members) != (e.endpoints[1] in members)}


def brute_event_exponents(bb, cuts_members):
    """Exponent of each closure variable over the union of boundaries."""
    union = set()
    for members in cuts_members:
        union |= brute_boundary(bb, members)
    out = {}
    for e in union:
        var = bb.variable_of_edge(e)
        out[var] = out.get(var, 0) + 1
    return out


@st.composite
def graphs(draw, min_vertices=1, max_vertices=4):
    n = draw(st.integers(min_vertices, max_vertices))
    possible = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(possible), unique=True) if possible else st.just([]))
    return Graph(n, frozenset(chosen))


@st.composite
def graphs_with_pair(draw, max_vertices=4):
    g = draw(graphs(min_vertices=2, max_vertices=max_vertices))
    u = draw(st.integers(0, g.vertex_count - 1))
    v = draw(st.integers(0, g.vertex_count - 1).filter(lambda x: x != u))
    return g, u, v


def fractions_01(denominator=12):
    return st.integers(0, denominator).map(lambda k: Fraction(k, denominator))


H = VariableId.H
V = VariableId.V
