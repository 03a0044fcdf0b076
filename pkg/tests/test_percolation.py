from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bunkbed import Graph, build_bunkbed, uniform_assignment
from bunkbed.bunkbed import SymmetricAssignment, minus, plus
from bunkbed.cuts import Side
from bunkbed.graph import GraphError
from bunkbed.percolation import (
    SizeGuardError,
    f_diagonal,
    f_polynomial,
    inclusion_exclusion,
    monte_carlo,
    nonconnection_polynomial,
    oracle_probability,
)
from bunkbed.poly import Polynomial
from bunkbed.sweep import ordered_pairs, small_graphs

from conftest import fractions_01, graphs_with_pair

QS = [Fraction(k, 7) for k in range(8)]


def test_oracle_examples(k2):
    assert oracle_probability(k2, uniform_assignment(k2, 0), minus(0), plus(1)) == 1
    assert oracle_probability(k2, uniform_assignment(k2, 1), minus(0), plus(1)) == 0
    one = build_bunkbed(Graph(1))
    for q in QS:
        assert oracle_probability(one, uniform_assignment(one, q), minus(0), plus(0)) == 1 - q


def test_oracle_refuses_large_graphs():
    bb = build_bunkbed(Graph.complete(4))
    with pytest.raises(SizeGuardError, match="cap"):
        oracle_probability(bb, uniform_assignment(bb, Fraction(1, 2)), minus(0), minus(1), edge_cap=10)


def test_k2_minus_side_matches_oracle(k2):
    poly = nonconnection_polynomial(k2, 0, 1, Side.MINUS_TARGET)
    for q in QS:
        a = uniform_assignment(k2, q)
        assert poly.evaluate(a) == 1 - oracle_probability(k2, a, minus(0), minus(1))


def test_edgeless_pair_is_never_connected():
    bb = build_bunkbed(Graph(2))
    for side, target in ((Side.MINUS_TARGET, minus(1)), (Side.PLUS_TARGET, plus(1))):
        poly = nonconnection_polynomial(bb, 0, 1, side)
        for q in QS:
            assert oracle_probability(bb, uniform_assignment(bb, q), minus(0), target) == 0
        assert poly == Polynomial.constant(1)
    assert f_polynomial(bb, 0, 1).is_zero()


def test_k2_f_is_q2_times_1_minus_q(k2):
    assert f_polynomial(k2, 0, 1).diagonal() == [0, 0, 1, -1]


def test_p2_f_expanded_form(p2):
    assert f_polynomial(p2, 0, 2).diagonal() == [0, 0, 0, 1, -2, 1]
    assert f_diagonal(p2, 0, 2) == [0, 0, 0, 1, -2, 1]


def test_rejects_equal_endpoints(k2):
    for call in (
        lambda: nonconnection_polynomial(k2, 0, 0, Side.MINUS_TARGET),
        lambda: f_polynomial(k2, 1, 1),
    ):
        with pytest.raises(GraphError):
            call()


@pytest.mark.parametrize("g", small_graphs(3, min_vertices=2), ids=str)
def test_literal_and_grouped_expansions_agree(g):
    bb = build_bunkbed(g)
    for u, v in ordered_pairs(g):
        for side in Side:
            literal = nonconnection_polynomial(bb, u, v, side, method="subsets")
            grouped = nonconnection_polynomial(bb, u, v, side, method="grouped")
            assert literal == grouped


def test_truncated_expansion_is_flagged(p2):
    full = inclusion_exclusion(p2, 0, 2, Side.PLUS_TARGET)
    assert not full.truncated and full.family_size == 16
    part = inclusion_exclusion(p2, 0, 2, Side.PLUS_TARGET, r_max=2)
    assert part.truncated
    assert part.by_order[1] == full.by_order[1]
    assert part.by_order[2] == full.by_order[2]
    assert full.total() == nonconnection_polynomial(p2, 0, 2, Side.PLUS_TARGET, method="grouped")


def test_truncated_expansion_size_guard():
    bb = build_bunkbed(Graph.complete(4))
    with pytest.raises(SizeGuardError):
        inclusion_exclusion(bb, 0, 1, Side.PLUS_TARGET, r_max=5, max_terms=1000)


def test_lattice_size_guard():
    bb = build_bunkbed(Graph.complete(5))
    with pytest.raises(SizeGuardError):
        f_polynomial(bb, 0, 1)


@settings(max_examples=30, deadline=None)
@given(graphs_with_pair(max_vertices=3), st.data())
def test_oracle_equivalence(gp, data):
    g, u, v = gp
    bb = build_bunkbed(g)
    a = SymmetricAssignment({var: data.draw(fractions_01()) for var in bb.variables})
    f = f_polynomial(bb, u, v)
    oracle = {}
    for side, target in ((Side.MINUS_TARGET, minus(v)), (Side.PLUS_TARGET, plus(v))):
        oracle[side] = oracle_probability(bb, a, minus(u), target)
        assert nonconnection_polynomial(bb, u, v, side).evaluate(a) == 1 - oracle[side]
    assert f.evaluate(a) == oracle[Side.MINUS_TARGET] - oracle[Side.PLUS_TARGET]


@settings(max_examples=40, deadline=None)
@given(graphs_with_pair(max_vertices=4))
def test_f_vanishes_at_zero_and_is_symmetric(gp):
    g, u, v = gp
    bb = build_bunkbed(g)
    f = f_polynomial(bb, u, v)
    assert f.constant_term == 0
    assert all(m.degree >= 1 for m in f.terms)
    assert f == f_polynomial(bb, v, u)
    assert f.diagonal() == f_diagonal(bb, u, v)


@settings(max_examples=20, deadline=None)
@given(graphs_with_pair(max_vertices=4))
def test_nonconnection_monotone_in_uniform_q(gp):
    g, u, v = gp
    bb = build_bunkbed(g)
    for side in Side:
        poly = nonconnection_polynomial(bb, u, v, side)
        values = [poly.evaluate(uniform_assignment(bb, q)) for q in QS]
        assert values == sorted(values)
        assert all(0 <= x <= 1 for x in values)


def test_monte_carlo_degenerate_cases(k2):
    full = monte_carlo(k2, uniform_assignment(k2, 0), minus(0), plus(1), 1000, seed=1)
    assert full.estimate == 1 and full.stderr == 0
    none = monte_carlo(k2, uniform_assignment(k2, 1), minus(0), plus(1), 1000, seed=1)
    assert none.estimate == 0 and none.stderr == 0


def test_monte_carlo_against_oracle(k2):
    a = uniform_assignment(k2, Fraction(1, 2))
    exact = oracle_probability(k2, a, minus(0), plus(1))
    res = monte_carlo(k2, a, minus(0), plus(1), 100_000, seed=2024)
    assert abs(float(res.estimate - exact)) <= 5 * res.stderr


def test_monte_carlo_is_reproducible(p2):
    a = uniform_assignment(p2, Fraction(1, 3))
    r1 = monte_carlo(p2, a, minus(0), plus(2), 20_000, seed=9)
    r2 = monte_carlo(p2, a, minus(0), plus(2), 20_000, seed=9)
    r3 = monte_carlo(p2, a, minus(0), plus(2), 20_000, seed=10)
    assert r1 == r2
    assert r1 != r3
    with pytest.raises(ValueError):
        monte_carlo(p2, a, minus(0), plus(2), 0, seed=9)
