"""Cuts of the bunkbed graph: boundaries, heights, supports, and the families
of cuts separating u- from v- (MinusTarget) or from v+ (PlusTarget).

A cut is a bitmask over the 2n bunkbed vertices (bit x is x-, bit n + x is
x+). Its support is then ``(mask ^ (mask >> n)) & full`` as a base-vertex
bitmask, which the vectorised helpers below exploit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from bunkbed.bunkbed import BBEdge, BBVertex, BunkbedGraph, Sign, minus, plus
from bunkbed.graph import GraphError, adjacency_masks, component_of


class Side(enum.Enum):
    MINUS_TARGET = "minus"  # S-: u- in A, v- not in A
    PLUS_TARGET = "plus"  # S+: u- in A, v+ not in A

    def other(self) -> Side:
        return Side.PLUS_TARGET if self is Side.MINUS_TARGET else Side.MINUS_TARGET


@dataclass(frozen=True, order=True)
class Cut:
    """A set of bunkbed vertices, stored as a bitmask over the fixed vertex order."""

    mask: int
    n: int

    @classmethod
    def of(cls, bb: BunkbedGraph, members: Iterable[BBVertex]) -> Cut:
        return cls(bb.vertex_mask(members), bb.n)

    def __contains__(self, w: BBVertex) -> bool:
        bit = w.base if w.sign is Sign.MINUS else self.n + w.base
        return bool(self.mask >> bit & 1)

    @property
    def members(self) -> list[BBVertex]:
        return [minus(x) for x in range(self.n) if self.mask >> x & 1] + [
            plus(x) for x in range(self.n) if self.mask >> (self.n + x) & 1
        ]

    @property
    def support_mask(self) -> int:
        full = (1 << self.n) - 1
        return (self.mask ^ (self.mask >> self.n)) & full

    def names(self) -> list[str]:
        return sorted(w.name for w in self.members)

    def __repr__(self):
        return "{" + ",".join(w.name for w in self.members) + "}"


@dataclass(frozen=True)
class CutFamily:
    side: Side
    u: int
    v: int
    cuts: tuple[Cut, ...]

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def masks(self) -> np.ndarray:
        return np.array([c.mask for c in self.cuts], dtype=np.int64)


def boundary_mask(bb: BunkbedGraph, mask: int) -> int:
    out = 0
    for j, (a, b) in enumerate(bb.edge_ends):
        if (mask >> a ^ mask >> b) & 1:
            out |= 1 << j
    return out


def boundary(bb: BunkbedGraph, a: Cut) -> frozenset[BBEdge]:
    """Edges of the bunkbed graph with exactly one endpoint in the cut."""
    bmask = boundary_mask(bb, a.mask)
    return frozenset(e for j, e in enumerate(bb.edges) if bmask >> j & 1)


def boundary_masks(bb: BunkbedGraph, masks: np.ndarray) -> np.ndarray:
    """Vectorised :func:`boundary_mask` over an array of cut bitmasks."""
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros_like(masks)
    for j, (a, b) in enumerate(bb.edge_ends):
        out |= (((masks >> a) ^ (masks >> b)) & 1) << j
    return out


def support_masks(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.int64)
    return (masks ^ (masks >> n)) & ((1 << n) - 1)


def height(a: Cut, x: int) -> int:
    if not 0 <= x < a.n:
        raise GraphError(f"vertex {x} out of range")
    return (a.mask >> x & 1) + (a.mask >> (a.n + x) & 1)


def support(a: Cut) -> frozenset[int]:
    s = a.support_mask
    return frozenset(x for x in range(a.n) if s >> x & 1)


def support_of_collection(cuts: Sequence[Cut]) -> frozenset[int]:
    if not cuts:
        raise ValueError("support of an empty collection is undefined")
    out = frozenset()
    for a in cuts:
        out |= support(a)
    return out


def target_bit(n: int, v: int, side: Side) -> int:
    return v if side is Side.MINUS_TARGET else n + v


def _check_pair(bb: BunkbedGraph, u: int, v: int) -> None:
    bb.base.check_vertex(u)
    bb.base.check_vertex(v)
    if u == v:
        raise GraphError("u and v must be distinct")


def family_masks(bb: BunkbedGraph, u: int, v: int, side: Side) -> np.ndarray:
    """Cut bitmasks of the family, ascending. There are 2^(2n - 2) of them."""
    _check_pair(bb, u, v)
    n = bb.n
    fixed_in, fixed_out = u, target_bit(n, v, side)
    free = [b for b in range(2 * n) if b not in (fixed_in, fixed_out)]
    masks = np.zeros(1 << len(free), dtype=np.int64)
    idx = np.arange(1 << len(free), dtype=np.int64)
    for i, b in enumerate(free):
        masks |= ((idx >> i) & 1) << b
    masks |= 1 << fixed_in
    return np.sort(masks)


def enumerate_family(bb: BunkbedGraph, u: int, v: int, side: Side) -> CutFamily:
    n = bb.n
    return CutFamily(side, u, v, tuple(Cut(int(m), n) for m in family_masks(bb, u, v, side)))


def in_family(a: Cut, u: int, v: int, side: Side) -> bool:
    return bool(a.mask >> u & 1) and not a.mask >> target_bit(a.n, v, side) & 1


@lru_cache(maxsize=256)
def _pair_tables(bb: BunkbedGraph, u: int, v: int) -> tuple[np.ndarray, np.ndarray]:
    """Per base-vertex subset S: whether u, v share a component of G[S], and
    the component of v in G[S] (empty when v is not in S)."""
    adj = adjacency_masks(bb.base)
    size = 1 << bb.n
    connected = np.zeros(size, dtype=bool)
    comp_v = np.zeros(size, dtype=np.int64)
    for s in range(size):
        c = component_of(adj, s, v)
        comp_v[s] = c
        connected[s] = bool(c >> u & 1)
    return connected, comp_v


def uv_connected_table(bb: BunkbedGraph, u: int, v: int) -> np.ndarray:
    return _pair_tables(bb, u, v)[0]


def v_component_table(bb: BunkbedGraph, u: int, v: int) -> np.ndarray:
    return _pair_tables(bb, u, v)[1]


def is_in_T(bb: BunkbedGraph, u: int, v: int, a: Cut) -> bool:
    """u and v both in supp(A) and joined inside G[supp(A)]."""
    s = a.support_mask
    if not (s >> u & 1 and s >> v & 1):
        return False
    return bool(component_of(adjacency_masks(bb.base), s, v) >> u & 1)


def t_masks(bb: BunkbedGraph, u: int, v: int, side: Side) -> np.ndarray:
    """The T sub-family (as bitmasks) of the given side."""
    masks = family_masks(bb, u, v, side)
    return masks[uv_connected_table(bb, u, v)[support_masks(bb.n, masks)]]


def flip_mask(n: int, mask, component):
    """Swap x- and x+ membership for every base vertex x in ``component``.

    Works on Python ints and on int64 arrays alike.
    """
    both = component | (component << n)
    lo = mask & component
    hi = (mask >> n) & component
    return (mask & ~both) | hi | (lo << n)
