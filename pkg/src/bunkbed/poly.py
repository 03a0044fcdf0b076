"""Sparse integer polynomials in the closure variables.

Event monomials (products of q over a union of cut boundaries) have every V
exponent in {0, 1} and every H exponent in {0, 1, 2}. :class:`MonomialCodec`
packs such a monomial into an integer key whose bits are

    [H exponent >= 2 | H exponent >= 1 | V exponent >= 1]

so that divisibility between event monomials is bitwise inclusion of keys.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from bunkbed.bunkbed import BunkbedGraph, SymmetricAssignment, VariableId
from bunkbed.cuts import Cut, boundary_mask


@dataclass(frozen=True)
class Monomial:
    """Product of closure variables; stored as sorted (variable, exponent) pairs."""

    powers: tuple[tuple[VariableId, int], ...] = ()

    def __post_init__(self):
        for var, e in self.powers:
            if e < 1:
                raise ValueError(f"exponent of {var!r} must be positive")

    @classmethod
    def from_dict(cls, exponents: Mapping[VariableId, int]) -> Monomial:
        return cls(tuple(sorted((v, e) for v, e in exponents.items() if e)))

    @classmethod
    def one(cls) -> Monomial:
        return cls()

    @cached_property
    def exponents(self) -> dict[VariableId, int]:
        return dict(self.powers)

    def exponent(self, var: VariableId) -> int:
        return self.exponents.get(var, 0)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    @property
    def variables(self) -> list[VariableId]:
        return [v for v, _ in self.powers]

    def divides(self, other: Monomial) -> bool:
        return all(other.exponent(v) >= e for v, e in self.powers)

    def __mul__(self, other: Monomial) -> Monomial:
        out = defaultdict(int, self.exponents)
        for v, e in other.powers:
            out[v] += e
        return Monomial.from_dict(out)

    def __truediv__(self, other: Monomial) -> Monomial:
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        out = dict(self.exponents)
        for v, e in other.powers:
            out[v] -= e
        return Monomial.from_dict(out)

    def sort_key(self):
        return tuple((v.sort_key(), e) for v, e in self.powers)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if not self.powers:
            return "1"
        return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in self.powers)

    __repr__ = __str__


def strictly_divides(m1: Monomial, m2: Monomial) -> bool:
    return m1 != m2 and m1.divides(m2)


class Polynomial:
    """Integer polynomial as a map from Monomial to nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        acc = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            acc[mono] += int(c)
        self.terms = {mono: c for mono, c in acc.items() if c}

    @classmethod
    def monomial(cls, mono: Monomial, coeff: int = 1) -> Polynomial:
        return cls({mono: coeff})

    @classmethod
    def constant(cls, c: int) -> Polynomial:
        return cls({Monomial.one(): c})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: Polynomial) -> Polynomial:
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return Polynomial(out)

    def __neg__(self) -> Polynomial:
        return Polynomial({mono: -c for mono, c in self.terms.items()})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, int):
            return Polynomial({mono: c * other for mono, c in self.terms.items()})
        if isinstance(other, Monomial):
            return Polynomial({mono * other: c for mono, c in self.terms.items()})
        out = defaultdict(int)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out[m1 * m2] += c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def coefficient(self, mono: Monomial) -> int:
        return self.terms.get(mono, 0)

    @property
    def constant_term(self) -> int:
        return self.terms.get(Monomial.one(), 0)

    @property
    def variables(self) -> set[VariableId]:
        return {v for mono in self.terms for v in mono.variables}

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def evaluate(self, a: SymmetricAssignment | Mapping[VariableId, Fraction]) -> Fraction:
        q = a.q_values if isinstance(a, SymmetricAssignment) else a
        missing = self.variables - set(q)
        if missing:
            raise ValueError(f"assignment lacks variables {sorted(missing)}")
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for v, e in mono.powers:
                term *= Fraction(q[v]) ** e
            total += term
        return total

    def diagonal(self) -> list[int]:
        """Coefficients (ascending degree) after setting every variable to one q."""
        if not self.terms:
            return []
        coeffs = [0] * (max(m.degree for m in self.terms) + 1)
        for mono, c in self.terms.items():
            coeffs[mono.degree] += c
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            sign = "+" if c > 0 else "-"
            body = str(abs(c)) if not mono.powers else f"{abs(c)}*{mono}"
            parts.append(sign + body)
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> Polynomial:
        text = text.strip()
        if text == "0":
            return cls()
        terms = []
        for tok in text.split():
            m = re.fullmatch(r"([+-])(\d+)((?:\*[VH]\([\d,]+\)(?:\^\d+)?)*)", tok)
            if not m:
                raise ValueError(f"bad term {tok!r}")
            c = int(m.group(2)) * (1 if m.group(1) == "+" else -1)
            exps = {}
            for name, e in re.findall(r"\*([VH]\([\d,]+\))(?:\^(\d+))?", m.group(3)):
                exps[VariableId.parse(name)] = int(e or 1)
            terms.append((Monomial.from_dict(exps), c))
        return cls(terms)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"


def univariate_text(coeffs: Sequence[int], var: str = "q") -> str:
    """Ascending-degree text such as ``q^3 - 2q^4 + q^5``."""
    parts = []
    for d, c in enumerate(coeffs):
        if not c:
            continue
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            power = var if d == 1 else f"{var}^{d}"
            body = power if mag == 1 else f"{mag}{power}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


class MonomialCodec:
    """Packs event monomials of one bunkbed graph into integer keys."""

    def __init__(self, bb: BunkbedGraph):
        self.bb = bb
        self.m = bb.m
        self.n = bb.n
        self._hmask = (1 << self.m) - 1

    def key_of_edges(self, edge_mask):
        """Key of the monomial of an edge bitmask; accepts ints or int64 arrays."""
        m = self.m
        hm = edge_mask & self._hmask
        hp = (edge_mask >> m) & self._hmask
        vert = edge_mask >> (2 * m)
        return (hm & hp) | ((hm | hp) << m) | (vert << (2 * m))

    def monomial(self, key: int) -> Monomial:
        key = int(key)
        m, n = self.m, self.n
        exps = {}
        for x in range(n):
            if key >> (2 * m + x) & 1:
                exps[VariableId.V(x)] = 1
        for j, (x, y) in enumerate(self.bb.base_edges):
            e = (key >> (m + j) & 1) + (key >> j & 1)
            if e:
                exps[VariableId.H(x, y)] = e
        return Monomial.from_dict(exps)

    def key(self, mono: Monomial) -> int:
        m = self.m
        edge_index = {e: j for j, e in enumerate(self.bb.base_edges)}
        key = 0
        for var, e in mono.powers:
            if var.kind == "V":
                if e != 1:
                    raise ValueError(f"{mono} is not an event monomial")
                key |= 1 << (2 * m + var.ends[0])
            else:
                j = edge_index[var.ends]
                if e > 2:
                    raise ValueError(f"{mono} is not an event monomial")
                key |= 1 << (m + j)
                if e == 2:
                    key |= 1 << j
        return key

    @staticmethod
    def divides(k1, k2):
        return (k1 & ~k2) == 0

    def degree(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        return np.array([int(k).bit_count() for k in keys.tolist()], dtype=np.int64)

    def polynomial(self, keys: np.ndarray, coeffs: np.ndarray) -> Polynomial:
        """Polynomial from parallel arrays of keys and (possibly repeated) coefficients."""
        acc = defaultdict(int)
        for k, c in zip(np.asarray(keys).tolist(), np.asarray(coeffs).tolist()):
            acc[k] += c
        return Polynomial({self.monomial(k): c for k, c in acc.items() if c})


def event_monomial(bb: BunkbedGraph, cuts: Sequence[Cut]) -> Monomial:
    """Monomial of P(E_A1 and ... and E_Ar): the q-product over the union of boundaries."""
    if not cuts:
        raise ValueError("event monomial of an empty collection is undefined")
    union = 0
    for a in cuts:
        union |= boundary_mask(bb, a.mask)
    return MonomialCodec(bb).monomial(MonomialCodec(bb).key_of_edges(union))
