from fractions import Fraction

import pytest

from bunkbed import Graph, build_bunkbed
from bunkbed.epsilon import (
    CompiledPolynomial, ThresholdError, certify_diagonal, sampled_bound, uniform_threshold,
)
from bunkbed.percolation import f_polynomial
from bunkbed.poly import Monomial, Polynomial

from conftest import V


def horner(coeffs, q):
    return sum(c * q**i for i, c in enumerate(coeffs))


def test_path_threshold_approaches_one(p2):
    est = uniform_threshold(p2, 0, 2, precision=Fraction(1, 256))
    assert Fraction(255, 256) <= est.uniform_threshold < 1
    assert est.certificate["diagonal"] == "q^3 - 2q^4 + q^5"
    assert est.certificate["sign_f(q_star)"] == 1
    assert est.certificate["sign_f(upper)"] == 0
    assert est.passed


@pytest.mark.parametrize("n", range(1, 6))
def test_paths_positive_on_the_open_interval(n):
    bb = build_bunkbed(Graph.path(n))
    est = uniform_threshold(bb, 0, n)
    assert est.uniform_threshold > Fraction(1, 2)


def test_disconnected_pair_is_vacuous():
    bb = build_bunkbed(Graph(3, frozenset({(0, 1)})))
    est = uniform_threshold(bb, 0, 2)
    assert est.vacuous and est.uniform_threshold is None


def test_certificate_re_evaluates_exactly():
    bb = build_bunkbed(Graph.complete(4))
    est = uniform_threshold(bb, 0, 1)
    coeffs = f_polynomial(bb, 0, 1).diagonal()
    q_star = Fraction(est.certificate["q_star"])
    assert horner(coeffs, q_star) == Fraction(est.certificate["f(q_star)"]) > 0
    upper = Fraction(est.certificate["upper"])
    assert horner(coeffs, upper) == Fraction(est.certificate["f(upper)"])


def test_certify_finds_an_interior_double_root():
    # q (1 - 2q)^2 touches zero at 1/2 without a sign change
    q_star, cert = certify_diagonal([0, 1, -4, 4], Fraction(1, 1000))
    assert Fraction(1, 2) - Fraction(1, 1000) <= q_star < Fraction(1, 2)
    assert cert["sign_f(upper)"] >= 0 and cert["roots_of_f/q^k_in_[0,upper]"] >= 1


def test_certify_tiny_first_root_still_positive():
    # q (1/1000 - q) > 0 only below 1/1000
    q_star, _ = certify_diagonal([0, 1, -1000], Fraction(1, 4))
    assert 0 < q_star < Fraction(1, 1000)


def test_negative_leading_behaviour_is_a_hard_failure():
    with pytest.raises(ThresholdError):
        certify_diagonal([0, -1, 5], Fraction(1, 100))


def test_sampled_bound_small_epsilon_passes():
    bb = build_bunkbed(Graph.complete(3))
    est = sampled_bound(bb, 0, 1, Fraction(1, 1000), trials=200, seed=3)
    assert est.passed and est.sampled_bound == Fraction(1, 1000) and not est.violations


def test_sampled_bound_whole_box_on_path(p2):
    est = sampled_bound(p2, 0, 2, 1, trials=300, seed=5)
    assert est.passed and est.sampled_bound == 1


def test_sampled_bound_no_trials(p2):
    est = sampled_bound(p2, 0, 2, Fraction(1, 2), trials=0, seed=0)
    assert est.passed and est.no_evidence


def test_sampled_bound_is_reproducible():
    bb = build_bunkbed(Graph.complete(3))
    a = sampled_bound(bb, 0, 1, Fraction(1, 10), trials=50, seed=11).to_json()
    b = sampled_bound(bb, 0, 1, Fraction(1, 10), trials=50, seed=11).to_json()
    assert a == b


def test_sampled_bound_halves_on_violation(p2):
    # a polynomial negative once any variable exceeds 1/8
    m1 = Monomial.from_dict({V(0): 1})
    m2 = Monomial.from_dict({V(0): 2})
    f = Polynomial({m1: 1, m2: -8})
    est = sampled_bound(p2, 0, 2, 1, trials=20, seed=1, f=f)
    assert not est.passed
    assert est.violations and est.sampled_bound <= Fraction(1, 8)


def test_compiled_polynomial_matches_fractions(p2):
    f = f_polynomial(p2, 0, 2)
    comp = CompiledPolynomial(f)
    nums, den = [3, 5, 7, 2, 9][: len(comp.variables)], 17
    point = {var: Fraction(x, den) for var, x in zip(comp.variables, nums)}
    assert Fraction(comp.scaled_value(nums, den), den**comp.degree) == f.evaluate(point)


def test_sampled_bound_validates_epsilon(p2):
    with pytest.raises(ValueError):
        sampled_bound(p2, 0, 2, 0, trials=1, seed=0)
