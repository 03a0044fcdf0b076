"""Non-connection probabilities as polynomials in the closure variables.

Two polynomial routes are provided and must agree:

``subsets``
    the literal inclusion-exclusion sum over every non-empty unordered
    sub-collection of the cut family, sign ``(-1)**(r+1)``, each term the
    event monomial of the collection. Exponential in the family size
    (2^(2n-2) cuts), so only usable for n <= 3 or with a truncation depth.

``grouped``
    the same sum regrouped by the union of boundaries U. Summing the signs of
    all collections whose union lies inside U gives 1 if some cut of the
    family has its boundary inside U and 0 otherwise, so the multilinear
    coefficient of U is the Moebius inversion of that upward-closed
    indicator over the edge-subset lattice. Cost 2^|E+-| instead of
    2^(2^(2n-2)).

An independent exact oracle sums over all open/closed configurations with a
union-find per configuration; it shares nothing with the polynomial code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations

import numpy as np

from bunkbed.bunkbed import BBVertex, BunkbedGraph, SymmetricAssignment
from bunkbed.cuts import Side, boundary_masks, family_masks
from bunkbed.graph import GraphError
from bunkbed.poly import MonomialCodec, Polynomial

DEFAULT_ORACLE_EDGE_CAP = 22
DEFAULT_LATTICE_EDGE_CAP = 22  # multivariate polynomial via the grouped route
DIAGONAL_EDGE_CAP = 26  # univariate restriction only; 2^26 int32 = 256 MiB
SUBSET_FAMILY_CAP = 20  # literal expansion over 2^family sub-collections


class SizeGuardError(RuntimeError):
    """Refusal to run an exponential computation beyond its cap."""


@dataclass
class InclusionExclusionExpansion:
    """Signed inclusion-exclusion sums, one polynomial per collection size r."""

    side: Side
    family_size: int
    by_order: dict[int, Polynomial] = field(default_factory=dict)
    truncated: bool = False

    def total(self) -> Polynomial:
        return reduce(lambda a, b: a + b, self.by_order.values(), Polynomial())


# ---------------------------------------------------------------------------
# literal inclusion-exclusion


def _subset_unions(bmasks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Union of boundaries and size for every sub-collection (index = bitmask)."""
    k = len(bmasks)
    unions = np.zeros(1 << k, dtype=np.int64)
    sizes = np.zeros(1 << k, dtype=np.int8)
    for i in range(k):
        lo = 1 << i
        unions[lo : 2 * lo] = unions[:lo] | bmasks[i]
        sizes[lo : 2 * lo] = sizes[:lo] + 1
    return unions[1:], sizes[1:]


def _combination_unions(bmasks: np.ndarray, r: int) -> np.ndarray:
    k = len(bmasks)
    count = math.comb(k, r)
    idx = np.fromiter(
        (i for combo in combinations(range(k), r) for i in combo), dtype=np.int64, count=count * r
    ).reshape(count, r)
    return np.bitwise_or.reduce(bmasks[idx], axis=1)


def inclusion_exclusion(
    bb: BunkbedGraph, u: int, v: int, side: Side, r_max: int | None = None,
    max_terms: int = 5_000_000,
) -> InclusionExclusionExpansion:
    """Literal expansion over unordered sub-collections of size 1..r_max."""
    masks = family_masks(bb, u, v, side)
    bmasks = boundary_masks(bb, masks)
    k = len(bmasks)
    top = k if r_max is None else min(r_max, k)
    codec = MonomialCodec(bb)
    out = InclusionExclusionExpansion(side, k, truncated=top < k)
    if top == k and k <= SUBSET_FAMILY_CAP:
        unions, sizes = _subset_unions(bmasks)
        keys = codec.key_of_edges(unions)
        for r in range(1, k + 1):
            sel = sizes == r
            out.by_order[r] = codec.polynomial(*_grouped(keys[sel], (-1) ** (r + 1)))
        return out
    needed = sum(math.comb(k, r) for r in range(1, top + 1))
    if needed > max_terms:
        raise SizeGuardError(
            f"inclusion-exclusion up to r={top} over {k} cuts needs {needed} terms (cap {max_terms})"
        )
    for r in range(1, top + 1):
        keys = codec.key_of_edges(_combination_unions(bmasks, r))
        out.by_order[r] = codec.polynomial(*_grouped(keys, (-1) ** (r + 1)))
    return out


def _grouped(keys: np.ndarray, sign: int) -> tuple[np.ndarray, np.ndarray]:
    uniq, counts = np.unique(keys, return_counts=True)
    return uniq, counts * sign


# ---------------------------------------------------------------------------
# grouped route


def _check_lattice(bb: BunkbedGraph, cap: int) -> int:
    e = len(bb.edges)
    if e > cap:
        raise SizeGuardError(f"bunkbed graph has {e} edges; the edge-subset lattice cap is {cap}")
    return e


def _superset_closure(flags: np.ndarray, e: int) -> None:
    for i in range(e):
        view = flags.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]


def _moebius(values: np.ndarray, e: int) -> None:
    for i in range(e):
        view = values.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]


def _union_indicator(bb: BunkbedGraph, u: int, v: int, side: Side, e: int) -> np.ndarray:
    """1 at every edge set containing the boundary of some cut of the family."""
    flags = np.zeros(1 << e, dtype=bool)
    flags[boundary_masks(bb, family_masks(bb, u, v, side))] = True
    _superset_closure(flags, e)
    return flags


def _multilinear_coefficients(bb: BunkbedGraph, u: int, v: int, sides: dict[Side, int], cap: int):
    e = _check_lattice(bb, cap)
    coeffs = np.zeros(1 << e, dtype=np.int32)
    for side, weight in sides.items():
        coeffs += weight * _union_indicator(bb, u, v, side, e).astype(np.int32)
    _moebius(coeffs, e)
    return coeffs


def _lattice_polynomial(bb, u, v, sides, cap) -> Polynomial:
    coeffs = _multilinear_coefficients(bb, u, v, sides, cap)
    (support,) = np.nonzero(coeffs)
    codec = MonomialCodec(bb)
    return codec.polynomial(codec.key_of_edges(support.astype(np.int64)), coeffs[support])


def _popcounts(e: int) -> np.ndarray:
    pc = np.zeros(1, dtype=np.uint8)
    for _ in range(e):
        pc = np.concatenate([pc, pc + 1])
    return pc


def _lattice_diagonal(bb, u, v, sides, cap) -> list[int]:
    e = _check_lattice(bb, cap)
    coeffs = _multilinear_coefficients(bb, u, v, sides, cap)
    out = np.bincount(_popcounts(e), weights=coeffs, minlength=e + 1)
    out = [int(round(c)) for c in out]
    while out and out[-1] == 0:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# public polynomial API


def _choose_method(bb: BunkbedGraph, method: str) -> str:
    if method == "auto":
        return "subsets" if (1 << (2 * bb.n - 2)) <= SUBSET_FAMILY_CAP else "grouped"
    if method not in ("subsets", "grouped"):
        raise ValueError(f"unknown method {method!r}")
    return method


def nonconnection_polynomial(
    bb: BunkbedGraph, u: int, v: int, side: Side, method: str = "auto",
    edge_cap: int = DEFAULT_LATTICE_EDGE_CAP,
) -> Polynomial:
    """P(u- not connected to the target) with target v- or v+ depending on side."""
    family_masks(bb, u, v, side)  # validates u != v
    if _choose_method(bb, method) == "subsets":
        return inclusion_exclusion(bb, u, v, side).total()
    return _lattice_polynomial(bb, u, v, {side: 1}, edge_cap)


def f_polynomial(
    bb: BunkbedGraph, u: int, v: int, method: str = "auto",
    edge_cap: int = DEFAULT_LATTICE_EDGE_CAP,
) -> Polynomial:
    """P(u- !<-> v+) - P(u- !<-> v-) in the closure variables."""
    family_masks(bb, u, v, Side.PLUS_TARGET)
    if _choose_method(bb, method) == "subsets":
        return (
            nonconnection_polynomial(bb, u, v, Side.PLUS_TARGET, "subsets")
            - nonconnection_polynomial(bb, u, v, Side.MINUS_TARGET, "subsets")
        )
    return _lattice_polynomial(bb, u, v, {Side.PLUS_TARGET: 1, Side.MINUS_TARGET: -1}, edge_cap)


def f_diagonal(bb: BunkbedGraph, u: int, v: int, edge_cap: int = DIAGONAL_EDGE_CAP) -> list[int]:
    """Ascending coefficients of f with every closure variable set to one q.

    Goes straight from the lattice coefficients to the univariate restriction,
    so it reaches graphs whose multivariate f is too large to materialise.
    """
    family_masks(bb, u, v, Side.PLUS_TARGET)
    return _lattice_diagonal(bb, u, v, {Side.PLUS_TARGET: 1, Side.MINUS_TARGET: -1}, edge_cap)


# ---------------------------------------------------------------------------
# configuration oracle


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@lru_cache(maxsize=16)
def _configuration_roots(bb: BunkbedGraph) -> np.ndarray:
    """Row c: union-find root of every vertex when exactly the edges in bitmask c are open."""
    ends = bb.edge_ends
    nv = len(bb.vertices)
    roots = np.empty((1 << len(ends), nv), dtype=np.int8)
    for c in range(1 << len(ends)):
        uf = UnionFind(nv)
        for j, (a, b) in enumerate(ends):
            if c >> j & 1:
                uf.union(a, b)
        roots[c] = [uf.find(x) for x in range(nv)]
    return roots


def _configuration_weights(edge_q: list[Fraction]) -> tuple[np.ndarray, int]:
    """Integer numerators of every configuration's probability, and the common denominator."""
    den = math.lcm(*(q.denominator for q in edge_q)) if edge_q else 1
    w = np.array([1], dtype=object)
    for q in edge_q:
        closed = q.numerator * (den // q.denominator)
        w = np.concatenate([w * closed, w * (den - closed)])
    return w, den ** len(edge_q)


def oracle_probability(
    bb: BunkbedGraph, a: SymmetricAssignment, s: BBVertex, t: BBVertex,
    edge_cap: int = DEFAULT_ORACLE_EDGE_CAP,
) -> Fraction:
    """Exact P(s <-> t) by summing over all 2^|E+-| configurations."""
    if len(bb.edges) > edge_cap:
        raise SizeGuardError(
            f"oracle refuses {len(bb.edges)} edges: 2^{len(bb.edges)} configurations exceed the cap of {edge_cap} edges"
        )
    si, ti = bb.vertex_bit[s], bb.vertex_bit[t]
    roots = _configuration_roots(bb)
    weights, den = _configuration_weights(a.edge_q(bb))
    connected = roots[:, si] == roots[:, ti]
    return Fraction(int(weights[connected].sum()), den)


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: Fraction
    stderr: float
    hits: int
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {
            "estimate": str(self.estimate),
            "estimate_float": float(self.estimate),
            "stderr": self.stderr,
            "hits": self.hits,
            "samples": self.samples,
            "seed": self.seed,
        }


MC_BLOCK = 8192


def _open_edges(p: np.ndarray, seed: int, block: int, size: int) -> np.ndarray:
    # Philox is counter-based; keying by (seed, block) makes blocks schedule-independent
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), block]))
    return rng.random((size, len(p))) < p


def _labels(nv: int, ends: np.ndarray, open_: np.ndarray) -> np.ndarray:
    """Component labels (least vertex index) per sample by min-label propagation."""
    labels = np.tile(np.arange(nv, dtype=np.int16), (open_.shape[0], 1))
    a, b = ends[:, 0], ends[:, 1]
    while True:
        la, lb = labels[:, a], labels[:, b]
        low = np.where(open_, np.minimum(la, lb), np.iinfo(np.int16).max)
        new = labels.copy()
        for j in range(len(a)):
            np.minimum(new[:, a[j]], low[:, j], out=new[:, a[j]])
            np.minimum(new[:, b[j]], low[:, j], out=new[:, b[j]])
        if np.array_equal(new, labels):
            return labels
        labels = new


def monte_carlo(
    bb: BunkbedGraph, a: SymmetricAssignment, s: BBVertex, t: BBVertex, samples: int, seed: int,
) -> MonteCarloResult:
    if samples < 1:
        raise ValueError("samples must be positive")
    p = np.array([float(1 - q) for q in a.edge_q(bb)])
    ends = np.array(bb.edge_ends, dtype=np.int64).reshape(-1, 2)
    si, ti = bb.vertex_bit[s], bb.vertex_bit[t]
    hits = 0
    for block, start in enumerate(range(0, samples, MC_BLOCK)):
        size = min(MC_BLOCK, samples - start)
        labels = _labels(len(bb.vertices), ends, _open_edges(p, seed, block, size))
        hits += int(np.count_nonzero(labels[:, si] == labels[:, ti]))
    est = Fraction(hits, samples)
    phat = hits / samples
    stderr = math.sqrt(phat * (1 - phat) / samples)
    return MonteCarloResult(est, stderr, hits, samples, seed)


def require_distinct(u: int, v: int) -> None:
    if u == v:
        raise GraphError("u and v must be distinct")
