"""Executable checks of the three cut claims behind positivity of f near q = 0,
and the decomposition f = sum over C in T+ of P(E_C) * (1 + g_C).

Claim 1: the component flip phi is a monomial-preserving bijection
         S+ \\ T+ -> S- \\ T-, so those first-order terms cancel exactly.
Claim 2: every A in T- has a witness B in T+ whose monomial strictly
         divides that of A.
Claim 3: for r >= 2, every surviving monomial of the order-r difference is
         strictly divided by the monomial of some cut in T+.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from bunkbed.bunkbed import BunkbedGraph, VariableId
from bunkbed.cuts import (
    Cut,
    Side,
    boundary_mask,
    boundary_masks,
    family_masks,
    flip_mask,
    in_family,
    is_in_T,
    support_masks,
    support_of_collection,
    uv_connected_table,
    v_component_table,
)
from bunkbed.graph import GraphError, adjacency_masks, component_of
from bunkbed.percolation import SizeGuardError, f_polynomial, require_distinct
from bunkbed.poly import Monomial, MonomialCodec, Polynomial

CLAIM3_COLLECTION_CAP = 2_000_000


@dataclass
class VerificationReport:
    claim: str
    graph: str
    u: int
    v: int
    witnesses: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out


def _describe(bb: BunkbedGraph) -> str:
    return f"n={bb.n} edges={bb.base_edges}"


# ---------------------------------------------------------------------------
# Claim 1


def _v_component(bb: BunkbedGraph, support: int, v: int) -> int:
    return component_of(adjacency_masks(bb.base), support, v)


def phi(bb: BunkbedGraph, u: int, v: int, a: Cut) -> Cut:
    """Map S+ \\ T+ to S- \\ T- by flipping the v-component of G[supp(a)]."""
    require_distinct(u, v)
    if not in_family(a, u, v, Side.PLUS_TARGET) or is_in_T(bb, u, v, a):
        raise GraphError(f"phi is defined on S+ \\ T+ only; got {a!r}")
    comp = _v_component(bb, a.support_mask, v)
    return Cut(flip_mask(bb.n, a.mask, comp), bb.n)


def phi_inverse(bb: BunkbedGraph, u: int, v: int, b: Cut) -> Cut:
    require_distinct(u, v)
    if not in_family(b, u, v, Side.MINUS_TARGET) or is_in_T(bb, u, v, b):
        raise GraphError(f"phi inverse is defined on S- \\ T- only; got {b!r}")
    comp = _v_component(bb, b.support_mask, v)
    return Cut(flip_mask(bb.n, b.mask, comp), bb.n)


def _non_t(bb, u, v, side) -> list[Cut]:
    masks = family_masks(bb, u, v, side)
    connected = uv_connected_table(bb, u, v)[support_masks(bb.n, masks)]
    return [Cut(int(m), bb.n) for m in masks[~connected]]


def verify_claim1(bb: BunkbedGraph, u: int, v: int, detail: bool = True) -> VerificationReport:
    require_distinct(u, v)
    rep = VerificationReport("claim1", _describe(bb), u, v)
    codec = MonomialCodec(bb)
    key = lambda c: codec.key_of_edges(boundary_mask(bb, c.mask))
    plus_side = _non_t(bb, u, v, Side.PLUS_TARGET)
    minus_side = _non_t(bb, u, v, Side.MINUS_TARGET)
    images = []
    fixed = 0
    for a in plus_side:
        b = phi(bb, u, v, a)
        images.append(b)
        problems = []
        if not in_family(b, u, v, Side.MINUS_TARGET) or is_in_T(bb, u, v, b):
            problems.append("image not in S- \\ T-")
        if b.support_mask != a.support_mask:
            problems.append("support changed")
        if key(b) != key(a):
            problems.append("event monomial changed")
        if not problems and phi_inverse(bb, u, v, b) != a:
            problems.append("inverse flip does not recover the cut")
        if b == a:
            fixed += 1
        if problems:
            rep.counterexamples.append({"cut": a.names(), "image": b.names(), "problems": problems})
        elif detail:
            rep.witnesses.append({
                "input": a.names(), "witness": b.names(),
                "property": "phi(A) in S- \\ T-, same support, same monomial "
                + str(codec.monomial(key(a))),
            })
    if len(set(images)) != len(images):
        rep.counterexamples.append({"problems": ["phi is not injective"]})
    if set(images) != set(minus_side):
        rep.counterexamples.append({"problems": ["phi is not onto S- \\ T-"]})
    cancellation = Counter(key(a) for a in plus_side)
    cancellation.subtract(key(b) for b in minus_side)
    leftover = {k: c for k, c in cancellation.items() if c}
    if leftover:
        rep.counterexamples.append({
            "problems": ["first-order cancellation polynomial is nonzero"],
            "polynomial": codec.polynomial(list(leftover), list(leftover.values())).to_text(),
        })
    rep.stats = {
        "S+ minus T+": len(plus_side),
        "S- minus T-": len(minus_side),
        "fixed points": fixed,
        "cancellation polynomial": "0" if not leftover else "nonzero",
    }
    return rep


# ---------------------------------------------------------------------------
# Claim 2


def claim2_witness(bb: BunkbedGraph, u: int, v: int, a: Cut) -> Cut:
    """B = {x- : x in supp(A)} for A in T-."""
    require_distinct(u, v)
    if not in_family(a, u, v, Side.MINUS_TARGET) or not is_in_T(bb, u, v, a):
        raise GraphError(f"claim 2 witness needs a cut in T-; got {a!r}")
    return Cut(a.support_mask, bb.n)


def _path_within(bb: BunkbedGraph, subset: int, u: int, v: int) -> list[int] | None:
    adj = adjacency_masks(bb.base)
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            path = [v]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in range(bb.n):
            if adj[x] >> y & 1 and subset >> y & 1 and y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def verify_claim2(bb: BunkbedGraph, u: int, v: int, detail: bool = True) -> VerificationReport:
    require_distinct(u, v)
    rep = VerificationReport("claim2", _describe(bb), u, v)
    codec = MonomialCodec(bb)
    n = bb.n
    t_minus = [
        Cut(int(m), n)
        for m in family_masks(bb, u, v, Side.MINUS_TARGET)
        if is_in_T(bb, u, v, Cut(int(m), n))
    ]
    for a in t_minus:
        b = claim2_witness(bb, u, v, a)
        ma = codec.monomial(codec.key_of_edges(boundary_mask(bb, a.mask)))
        mb = codec.monomial(codec.key_of_edges(boundary_mask(bb, b.mask)))
        problems = []
        if not (in_family(b, u, v, Side.PLUS_TARGET) and is_in_T(bb, u, v, b)):
            problems.append("witness not in T+")
        if not (mb.divides(ma) and mb != ma):
            problems.append("witness monomial does not strictly divide")
        path = _path_within(bb, a.support_mask, u, v)
        step = None
        if path is None:
            problems.append("no u-v path inside supp(A)")
        else:
            for x, y in zip(path, path[1:]):
                if a.mask >> x & 1 and a.mask >> (n + y) & 1:
                    step = (x, y)
                    break
            if step is None:
                problems.append("no step from a minus copy to a plus copy along the path")
            elif ma.exponent(VariableId.H(*step)) != 2:
                problems.append(f"H{step} squared does not divide the monomial of A")
            if any(mb.exponent(VariableId.H(x, y)) for x, y in zip(path, path[1:])):
                problems.append("a path variable divides the witness monomial")
        if problems:
            rep.counterexamples.append({"cut": a.names(), "witness": b.names(), "problems": problems})
        elif detail:
            rep.witnesses.append({
                "input": a.names(), "witness": b.names(),
                "property": f"{mb} strictly divides {ma}; path {path}, H{step}^2 divides",
            })
    rep.stats = {"T-": len(t_minus)}
    return rep


# ---------------------------------------------------------------------------
# Claim 3


def flip_collection(bb: BunkbedGraph, u: int, v: int, cuts: list[Cut]) -> list[Cut]:
    """Flip the v-component of G[supp(A1..Ar)] in every cut of the collection."""
    require_distinct(u, v)
    s = 0
    for x in support_of_collection(cuts):
        s |= 1 << x
    if uv_connected_table(bb, u, v)[s]:
        raise GraphError("u and v share a component of G[S]; the flip is undefined")
    comp = int(v_component_table(bb, u, v)[s])
    return [Cut(flip_mask(bb.n, c.mask, comp), bb.n) for c in cuts]


def _collections(masks: np.ndarray, r: int) -> np.ndarray:
    k = len(masks)
    count = math.comb(k, r)
    if count > CLAIM3_COLLECTION_CAP:
        raise SizeGuardError(f"{count} collections of size {r} exceed the cap {CLAIM3_COLLECTION_CAP}")
    idx = np.fromiter(
        (i for combo in combinations(range(k), r) for i in combo), dtype=np.int64, count=count * r
    ).reshape(count, r)
    return masks[idx]


def _collection_data(bb, codec, cols):
    bm = boundary_masks(bb, cols)
    keys = codec.key_of_edges(np.bitwise_or.reduce(bm, axis=1))
    supports = np.bitwise_or.reduce(support_masks(bb.n, cols), axis=1)
    return keys, supports


def _canonical_rows(cols: np.ndarray) -> np.ndarray:
    rows = np.sort(cols, axis=1)
    return rows[np.lexsort(rows.T[::-1])]


@dataclass
class _TPlus:
    """Distinct event monomials of T+, ranked canonically, with a representative cut."""

    keys: np.ndarray
    rank: np.ndarray
    cuts: list[int]


def _t_plus(bb, u, v, codec) -> _TPlus:
    masks = family_masks(bb, u, v, Side.PLUS_TARGET)
    masks = masks[uv_connected_table(bb, u, v)[support_masks(bb.n, masks)]]
    keys = codec.key_of_edges(boundary_masks(bb, masks))
    uniq, first = np.unique(keys, return_index=True)
    monos = [codec.monomial(k) for k in uniq.tolist()]
    order = sorted(range(len(uniq)), key=lambda i: (monos[i].degree, monos[i].sort_key()))
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[order] = np.arange(len(uniq))
    return _TPlus(uniq, rank, [int(masks[i]) for i in first])


def _strict_divisor(tp: _TPlus, keys: np.ndarray) -> np.ndarray:
    """Index into tp of the canonically smallest strict divisor of each key, or -1."""
    if len(tp.keys) == 0 or len(keys) == 0:
        return np.full(len(keys), -1, dtype=np.int64)
    k = keys[:, None]
    t = tp.keys[None, :]
    ok = ((t & ~k) == 0) & (t != k)
    ranked = np.where(ok, tp.rank[None, :], np.iinfo(np.int64).max)
    best = np.argmin(ranked, axis=1)
    return np.where(ok.any(axis=1), best, -1)


def _strictly_divided_by(tp: _TPlus, keys: np.ndarray) -> np.ndarray:
    """Whether each key strictly divides some T+ monomial (the reverse direction)."""
    if len(tp.keys) == 0 or len(keys) == 0:
        return np.zeros(len(keys), dtype=bool)
    k = keys[:, None]
    t = tp.keys[None, :]
    return (((k & ~t) == 0) & (t != k)).any(axis=1)


def _minus_layer_key_table(bb, codec) -> np.ndarray:
    """Monomial key of the cut {x- : x in S} for every base subset S."""
    subsets = np.arange(1 << bb.n, dtype=np.int64)
    return codec.key_of_edges(boundary_masks(bb, subsets))


def verify_claim3(bb: BunkbedGraph, u: int, v: int, r: int, detail: bool = True) -> VerificationReport:
    require_distinct(u, v)
    if r < 2:
        raise ValueError("claim 3 concerns collections of r >= 2 cuts")
    rep = VerificationReport("claim3", _describe(bb), u, v)
    n = bb.n
    codec = MonomialCodec(bb)
    plus_masks = family_masks(bb, u, v, Side.PLUS_TARGET)
    minus_masks = family_masks(bb, u, v, Side.MINUS_TARGET)
    if r > len(plus_masks):
        raise ValueError(f"r={r} exceeds the family size {len(plus_masks)}")
    connected = uv_connected_table(bb, u, v)
    comp_v = v_component_table(bb, u, v)
    tp = _t_plus(bb, u, v, codec)
    b_keys = _minus_layer_key_table(bb, codec)

    side_data = {}
    for side, masks in ((Side.PLUS_TARGET, plus_masks), (Side.MINUS_TARGET, minus_masks)):
        cols = _collections(masks, r)
        keys, supports = _collection_data(bb, codec, cols)
        side_data[side] = (cols, keys, supports)

    # the statement: surviving monomials of the order-r difference
    pk, pc = np.unique(side_data[Side.PLUS_TARGET][1], return_counts=True)
    mk, mc = np.unique(side_data[Side.MINUS_TARGET][1], return_counts=True)
    all_keys = np.union1d(pk, mk)
    coeff = np.zeros(len(all_keys), dtype=np.int64)
    coeff[np.searchsorted(all_keys, pk)] += pc
    coeff[np.searchsorted(all_keys, mk)] -= mc
    survivors, surv_coeff = all_keys[coeff != 0], coeff[coeff != 0]
    divisor = _strict_divisor(tp, survivors)
    reverse = _strictly_divided_by(tp, survivors)
    for i in np.nonzero(divisor < 0)[0].tolist():
        rep.counterexamples.append({
            "monomial": str(codec.monomial(survivors[i])), "coefficient": int(surv_coeff[i]),
            "problems": ["no T+ monomial strictly divides this surviving monomial"],
        })
    if detail:
        for i in np.nonzero(divisor >= 0)[0].tolist():
            j = divisor[i]
            rep.witnesses.append({
                "input": str(codec.monomial(survivors[i])),
                "coefficient": int(surv_coeff[i]),
                "witness": Cut(tp.cuts[j], n).names(),
                "property": f"{codec.monomial(tp.keys[j])} strictly divides",
            })

    # the proof: flip pairing of collections with u, v apart in G[S]
    p_cols, p_keys, p_sup = side_data[Side.PLUS_TARGET]
    m_cols, _, m_sup = side_data[Side.MINUS_TARGET]
    apart = ~connected[p_sup]
    comps = comp_v[p_sup[apart]][:, None]
    flipped = flip_mask(n, p_cols[apart], comps)
    f_keys, f_sup = _collection_data(bb, codec, flipped)
    in_minus = ((flipped >> u) & 1).all(axis=1) & (((flipped >> v) & 1) == 0).all(axis=1)
    pairing_problems = []
    if not in_minus.all():
        pairing_problems.append("a flipped cut leaves S-")
    if not np.array_equal(f_keys, p_keys[apart]):
        pairing_problems.append("flip changed an event monomial")
    if not np.array_equal(f_sup, p_sup[apart]):
        pairing_problems.append("flip changed a support")
    if not np.array_equal(_canonical_rows(flipped), _canonical_rows(m_cols[~connected[m_sup]])):
        pairing_problems.append("flip is not a bijection onto the separated S- collections")
    fixed = int((np.sort(flipped, axis=1) == np.sort(p_cols[apart], axis=1)).all(axis=1).sum())
    if pairing_problems:
        rep.counterexamples.append({"problems": pairing_problems})

    # the proof: B = {x- : x in S} for collections with u, v joined in G[S]
    unpaired = 0
    for side, (cols, keys, sup) in side_data.items():
        joined = connected[sup]
        bk = b_keys[sup[joined]]
        ck = keys[joined]
        if not ((bk & ~ck) == 0).all():
            rep.counterexamples.append({
                "side": side.value, "problems": ["B = {x- : x in S} does not divide the collection monomial"],
            })
        # equality case: fall back to B restricted to the u-v component of G[S]
        equal = bk == ck
        s_eq = sup[joined][equal]
        comp_uv = comp_v[s_eq]
        c_keys = b_keys[comp_uv]
        bad = ~((c_keys != ck[equal]) & ((c_keys & ~ck[equal]) == 0))
        unpaired += int(bad.sum())
        if bad.any():
            rep.counterexamples.append({
                "side": side.value,
                "problems": [f"{int(bad.sum())} joined collections have no strict T+ divisor via B or C"],
            })
    rep.stats = {
        "r": r,
        "collections per side": int(len(p_cols)),
        "surviving monomials": int(len(survivors)),
        "surviving strictly divided by T+ (as stated)": int((divisor >= 0).sum()),
        "surviving strictly dividing some T+ (reverse direction)": int(reverse.sum()),
        "separated S+ collections": int(apart.sum()),
        "flip fixed points": fixed,
        "joined collections without witness": unpaired,
    }
    return rep


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Decomposition:
    u: int
    v: int
    f: Polynomial
    leaders: list[tuple[Cut, Monomial, Polynomial]]
    residual: Polynomial

    @property
    def passed(self) -> bool:
        return self.residual.is_zero() and all(g.constant_term == 0 for _, _, g in self.leaders)

    def reconstruct(self) -> Polynomial:
        total = self.residual
        for _, mono, g in self.leaders:
            total = total + (Polynomial.constant(1) + g) * mono
        return total

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "f": self.f.to_text(),
            "residual": self.residual.to_text(),
            "leaders": [
                {"cut": c.names(), "monomial": str(m), "g": g.to_text()} for c, m, g in self.leaders
            ],
        }


def decompose_f(bb: BunkbedGraph, u: int, v: int, f: Polynomial | None = None) -> Decomposition:
    """Write f as a sum of m_C (1 + g_C) over leaders C in T+, with g_C(0) = 0.

    Terms of f are taken in order of increasing degree. A term whose monomial
    is carried by c >= its coefficient cuts of T+ opens that many leaders
    (exact match); any other term is charged to the open leader whose
    monomial strictly divides it, fewest variables first, then canonical
    order. Terms with neither go to the residual.
    """
    require_distinct(u, v)
    if f is None:
        f = f_polynomial(bb, u, v)
    codec = MonomialCodec(bb)
    masks = family_masks(bb, u, v, Side.PLUS_TARGET)
    masks = masks[uv_connected_table(bb, u, v)[support_masks(bb.n, masks)]]
    carriers: dict[Monomial, list[Cut]] = {}
    for m, k in zip(masks.tolist(), codec.key_of_edges(boundary_masks(bb, masks)).tolist()):
        carriers.setdefault(codec.monomial(k), []).append(Cut(int(m), bb.n))
    opened: list[tuple[Cut, Monomial, dict]] = []
    by_leader: dict[Monomial, dict] = {}
    residual = {}
    for mono, c in sorted(f.terms.items(), key=lambda t: (t[0].degree, t[0].sort_key())):
        cuts = carriers.get(mono, [])
        if 1 <= c <= len(cuts):
            for cut in cuts[:c]:
                opened.append((cut, mono, {}))
            by_leader[mono] = opened[-1][2]
            continue
        divisors = [d for d in by_leader if d != mono and d.divides(mono)]
        if not divisors:
            residual[mono] = c
            continue
        leader = min(divisors, key=lambda d: (len(d.powers), d.sort_key()))
        quotient = mono / leader
        by_leader[leader][quotient] = by_leader[leader].get(quotient, 0) + c
    leaders = sorted(((cut, mono, Polynomial(g)) for cut, mono, g in opened), key=lambda t: t[0])
    return Decomposition(u, v, f, leaders, Polynomial(residual))
