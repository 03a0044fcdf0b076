"""Per-instance evidence for how far into q > 0 the polynomial f stays positive.

``uniform_threshold`` is rigorous on the diagonal (all closure variables equal):
root counting on the exact univariate restriction certifies f > 0 on (0, q*].
``sampled_bound`` is empirical in the full box (0, epsilon]^k, but each
evaluation is exact, so a reported sign is never a rounding artefact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from bunkbed.bunkbed import BunkbedGraph
from bunkbed.percolation import f_diagonal, f_polynomial, require_distinct
from bunkbed.poly import Polynomial, univariate_text

SAMPLE_DENOMINATOR = 10**6
MAX_HALVINGS = 60


class ThresholdError(RuntimeError):
    """f is negative just above q = 0, which the cut argument rules out."""


@dataclass
class ThresholdEstimate:
    u: int
    v: int
    uniform_threshold: Fraction | None = None
    certificate: dict = field(default_factory=dict)
    sampled_bound: Fraction | None = None
    requested_epsilon: Fraction | None = None
    trials: int = 0
    seed: int | None = None
    violations: list = field(default_factory=list)
    vacuous: bool = False
    no_evidence: bool = False
    method: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.vacuous or self.no_evidence:
            return True
        if self.uniform_threshold is not None and not self.uniform_threshold > 0:
            return False
        if self.requested_epsilon is not None:
            return not self.violations
        return True

    def to_json(self) -> dict:
        s = lambda x: None if x is None else str(x)
        return {
            "u": self.u,
            "v": self.v,
            "pass": self.passed,
            "vacuous": self.vacuous,
            "uniform_threshold": s(self.uniform_threshold),
            "certificate": self.certificate,
            "requested_epsilon": s(self.requested_epsilon),
            "sampled_bound": s(self.sampled_bound),
            "trials": self.trials,
            "seed": self.seed,
            "no_evidence": self.no_evidence,
            "violations": self.violations,
            "method": self.method,
        }


def _horner(coeffs: list[int], q: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def certify_diagonal(coeffs: list[int], precision: Fraction) -> tuple[Fraction, dict]:
    """Largest q* found by bisection with f > 0 on all of (0, q*].

    f = q^k h(q) with h(0) > 0; q* is root-free for h by exact Sturm counting,
    so the certificate also excludes roots of even multiplicity, which a bare
    sign-change bisection would miss.
    """
    k = next(i for i, c in enumerate(coeffs) if c)
    h = coeffs[k:]
    if h[0] < 0:
        raise ThresholdError(
            f"f restricted to the diagonal starts with {h[0]} q^{k}: negative near q = 0"
        )
    q = sympy.Symbol("q")
    hp = sympy.Poly(list(reversed(h)), q, domain=sympy.QQ)
    roots = lambda hi: int(hp.count_roots(0, sympy.Rational(hi.numerator, hi.denominator)))
    lo, hi = Fraction(0), Fraction(1)
    steps = 0
    if roots(hi) == 0:
        lo = hi
    else:
        while lo == 0 or hi - lo > precision:
            mid = (lo + hi) / 2
            if roots(mid) == 0:
                lo = mid
            else:
                hi = mid
            steps += 1
    f_lo = _horner(coeffs, lo)
    cert = {
        "lowest_degree": k,
        "lowest_coefficient": h[0],
        "q_star": str(lo),
        "f(q_star)": str(f_lo),
        "sign_f(q_star)": _sign(f_lo),
        "roots_of_f/q^k_in_[0,q_star]": roots(lo),
        "bisection_steps": steps,
    }
    if lo < 1:
        f_hi = _horner(coeffs, hi)
        cert.update({
            "upper": str(hi), "f(upper)": str(f_hi), "sign_f(upper)": _sign(f_hi),
            "roots_of_f/q^k_in_[0,upper]": roots(hi),
        })
    return lo, cert


def uniform_threshold(
    bb: BunkbedGraph, u: int, v: int, precision=Fraction(1, 1024), diagonal: list[int] | None = None,
) -> ThresholdEstimate:
    require_distinct(u, v)
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    coeffs = f_diagonal(bb, u, v) if diagonal is None else diagonal
    est = ThresholdEstimate(u, v, method={"uniform": "Sturm-count bisection on the diagonal restriction",
                                          "precision": str(precision)})
    if not any(coeffs):
        est.vacuous = True
        est.certificate = {"diagonal": "0"}
        return est
    est.uniform_threshold, est.certificate = certify_diagonal(coeffs, precision)
    est.certificate["diagonal"] = univariate_text(coeffs)
    return est


class CompiledPolynomial:
    """Exact sign evaluation at rational points sharing one denominator."""

    def __init__(self, f: Polynomial):
        self.variables = sorted(f.variables)
        index = {var: i for i, var in enumerate(self.variables)}
        self.terms = [
            (c, [(index[var], e) for var, e in mono.powers], mono.degree)
            for mono, c in f.sorted_terms()
        ]
        self.degree = max((d for _, _, d in self.terms), default=0)

    def scaled_value(self, numerators: list[int], denominator: int) -> int:
        """f(numerators / denominator) * denominator**degree, as an exact integer."""
        dpow = [denominator**i for i in range(self.degree + 1)]
        total = 0
        for c, powers, deg in self.terms:
            total += c * math.prod(numerators[i] ** e for i, e in powers) * dpow[self.degree - deg]
        return total


def _sample_numerators(seed: int, trial: int, count: int) -> list[int]:
    rng = np.random.default_rng([seed, trial])
    return rng.integers(1, SAMPLE_DENOMINATOR + 1, size=count).tolist()


def sampled_bound(
    bb: BunkbedGraph, u: int, v: int, epsilon, trials: int, seed: int,
    f: Polynomial | None = None,
) -> ThresholdEstimate:
    """Evaluate f exactly at random points of (0, epsilon]^k; halve epsilon on failure."""
    require_distinct(u, v)
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    est = ThresholdEstimate(u, v, requested_epsilon=epsilon, trials=trials, seed=seed,
                            method={"sampled": "exact evaluation at q_i = epsilon * k_i / 10^6"})
    if trials == 0:
        est.no_evidence = True
        est.sampled_bound = epsilon
        return est
    if f is None:
        f = f_polynomial(bb, u, v)
    if f.is_zero():
        est.vacuous = True
        return est
    compiled = CompiledPolynomial(f)
    k = len(compiled.variables)
    samples = [_sample_numerators(seed, t, k) for t in range(trials)]
    eps = epsilon
    for _ in range(MAX_HALVINGS):
        den = eps.denominator * SAMPLE_DENOMINATOR
        bad = None
        for t, ks in enumerate(samples):
            nums = [eps.numerator * x for x in ks]
            if compiled.scaled_value(nums, den) <= 0:
                bad = {
                    "epsilon": str(eps),
                    "trial": t,
                    "assignment": {var.name: str(Fraction(x, den)) for var, x in zip(compiled.variables, nums)},
                }
                break
        if bad is None:
            est.sampled_bound = eps
            return est
        est.violations.append(bad)
        eps /= 2
    est.sampled_bound = None
    return est
