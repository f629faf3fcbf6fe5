"""Exact arithmetic in Q(zeta_p) on the power basis 1, zeta, ..., zeta^(p-2)."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

from ..hodge import INFINITE

MAX_CYCLOTOMIC_PRIME_GAP = 20  # p - 1 <= 20


class Cyclotomic:
    """Element sum(coords[i] * zeta_p^i) of Q(zeta_p), always in reduced form."""

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords: Iterable):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) == p:
            # Z[x]/(x^p - 1) representative: fold zeta^(p-1) = -(1 + ... + zeta^(p-2))
            top = coords[-1]
            coords = tuple(c - top for c in coords[:-1])
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} or {p} coordinates for p={p}, got {len(coords)}")
        self.p = p
        self.coords = coords

    # construction ------------------------------------------------------

    @classmethod
    def from_int(cls, p: int, value) -> "Cyclotomic":
        return cls(p, (Fraction(value),) + (Fraction(0),) * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, j: int) -> "Cyclotomic":
        v = [0] * p
        v[j % p] = 1
        return cls(p, v)

    @classmethod
    def from_exponent_counts(cls, p: int, counts: Sequence[int]) -> "Cyclotomic":
        """sum_j counts[j] * zeta^j for j = 0..p-1."""
        return cls(p, [int(c) for c in counts])

    # arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.p != self.p:
                raise ValueError("mixing different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_int(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic(self.p, (a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.p, (-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic(self.p, (a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, (a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        acc = [Fraction(0)] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        acc[(i + j) % p] += a * b
        return Cyclotomic(p, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, (a / other for a in self.coords))
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyclotomic.from_int(self.p, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "Cyclotomic":
        """1/x as the product of the other Galois conjugates divided by the norm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        prod = Cyclotomic.from_int(self.p, 1)
        for m in range(2, self.p):
            prod = prod * self.galois(m)
        norm = self * prod
        return prod / norm.rational_value()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_int(self.p, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.p == other.p and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"Cyclotomic(p={self.p}, {' + '.join(terms) or '0'})"

    # structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def galois(self, m: int) -> "Cyclotomic":
        """Image under zeta -> zeta^m."""
        p = self.p
        if m % p == 0:
            raise ValueError("zeta -> zeta^m needs m prime to p")
        acc = [Fraction(0)] * p
        for i, c in enumerate(self.coords):
            acc[(i * m) % p] += c
        return Cyclotomic(p, acc)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    def embed(self, m: int = 1, dps: int | None = None):
        """Complex value under zeta -> exp(2 pi i m / p), as an mpmath number."""
        with mpmath.workdps(dps or mpmath.mp.dps):
            z = mpmath.exp(2j * mpmath.pi * m / self.p)
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * z**i for i, c in enumerate(self.coords))

    def to_complex(self, m: int = 1) -> complex:
        z = cmath.exp(2j * cmath.pi * m / self.p)
        return sum(float(c) * z**i for i, c in enumerate(self.coords))


CyclotomicLike = Union[Cyclotomic, int, Fraction]


@lru_cache(maxsize=None)
def _uniformizer_cofactor(p: int) -> Cyclotomic:
    # prod_{i=2}^{p-1} (1 - zeta^i), so that (1 - zeta) * cofactor = p
    out = Cyclotomic.from_int(p, 1)
    for i in range(2, p):
        out = out * (Cyclotomic.from_int(p, 1) - Cyclotomic.zeta_power(p, i))
    return out


def _vp(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def zeta_valuation(x: Cyclotomic, allow_rational: bool = False):
    """Largest m with (1 - zeta_p)^m dividing x; INFINITE for zero.

    Integral input is required unless ``allow_rational`` is set, in which case
    the common denominator d is cleared first and (p-1) * v_p(d) subtracted.
    """
    if x.is_zero():
        return INFINITE
    p = x.p
    if not x.is_integral():
        if not allow_rational:
            raise ValueError("valuation is defined here for integral elements only")
        den = math.lcm(*(c.denominator for c in x.coords))
        return zeta_valuation(x * den) - (p - 1) * _vp(den, p)
    coords = [int(c) for c in x.coords]
    m = 0
    while all(c % p == 0 for c in coords):
        coords = [c // p for c in coords]
        m += p - 1
    cof = _uniformizer_cofactor(p)
    y = Cyclotomic(p, coords)
    while sum(int(c) for c in y.coords) % p == 0:
        y = (y * cof) / p
        m += 1
    return m


def ord_q(x: Cyclotomic) -> Fraction:
    """q-adic valuation for q = p, allowing p-power denominators."""
    v = zeta_valuation(x, allow_rational=True)
    if v is INFINITE:
        return v
    return Fraction(v, x.p - 1)
