"""Finite fields F_{p^k} with discrete log tables.

Elements are encoded as integers 0 <= x < p^k whose base-p digits are the
coefficients (constant term first) of a polynomial modulo the defining
modulus.  Prime-field elements therefore encode as themselves.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

FIELD_SIZE_CAP = 200_000


class FieldError(ValueError):
    pass


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(x % p)
        x //= p
    return out


def _encode(digits, p: int) -> int:
    out = 0
    for d in reversed(digits):
        out = out * p + d
    return out


def _mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Product of digit vectors modulo a monic ``modulus`` (low degree first)."""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d] % p
        if c:
            for t in range(k + 1):
                prod[d - k + t] -= c * modulus[t]
    return [x % p for x in prod[:k]]


def _powmod(a: list[int], e: int, modulus: list[int], p: int) -> list[int]:
    k = len(modulus) - 1
    out = [1] + [0] * (k - 1)
    while e:
        if e & 1:
            out = _mulmod(out, a, modulus, p)
        a = _mulmod(a, a, modulus, p)
        e >>= 1
    return out


def smallest_irreducible(p: int, k: int) -> list[int]:
    """Monic irreducible of degree k with the smallest lower-coefficient encoding."""
    for low in range(p**k):
        coeffs = _digits(low, p, k) + [1]
        if k == 1 or gf_irreducible_p([ZZ(c) for c in reversed(coeffs)], p, ZZ):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


class ExtField:
    """F_q for q = p^k with exp/log tables and a trace table.

    ``exp[m]`` encodes g^m for the generator g, ``log[x]`` is the discrete log
    of a nonzero encoding (``log[0] == -1``), and ``trace_of[x]`` is the
    absolute trace of encoding x into F_p.
    """

    def __init__(self, p: int, k: int = 1):
        if not isprime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        q = p**k
        if q > FIELD_SIZE_CAP:
            raise FieldError(f"p^k = {q} exceeds the cap {FIELD_SIZE_CAP}")
        self.p, self.k, self.q = p, k, q
        self.order = q - 1
        self.modulus = smallest_irreducible(p, k)
        self.generator = self._find_generator()

        exp = np.empty(self.order, dtype=np.int64)
        g = _digits(self.generator, p, k)
        cur = [1] + [0] * (k - 1)
        for m in range(self.order):
            exp[m] = _encode(cur, p)
            cur = _mulmod(cur, g, self.modulus, p)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(self.order, dtype=np.int64)
        self.exp, self.log = exp, log

        digits = self.digit_array(np.arange(q, dtype=np.int64))
        basis_traces = np.array([self._basis_trace(i) for i in range(k)], dtype=np.int64)
        self.trace_of = (digits @ basis_traces) % p
        self.trace_by_log = self.trace_of[exp]

    def __repr__(self):
        return f"ExtField(p={self.p}, k={self.k}, modulus={self.modulus}, generator={self.generator})"

    def _find_generator(self) -> int:
        if self.order == 1:
            return 1
        primes = list(factorint(self.order))
        for cand in range(1, self.q):
            a = _digits(cand, self.p, self.k)
            one = [1] + [0] * (self.k - 1)
            if all(_powmod(a, self.order // r, self.modulus, self.p) != one for r in primes):
                return cand
        raise FieldError("no primitive element found")  # pragma: no cover

    def _basis_trace(self, i: int) -> int:
        # trace of multiplication by x^i on the basis 1, x, ..., x^(k-1)
        xi = [0] * self.k
        xi[i] = 1
        total = 0
        for j in range(self.k):
            xj = [0] * self.k
            xj[j] = 1
            total += _mulmod(xi, xj, self.modulus, self.p)[j]
        return total % self.p

    # element arithmetic on encodings (scalars or numpy arrays) -------------

    def digit_array(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return np.stack([(x // self.p**i) % self.p for i in range(self.k)], axis=-1)

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i in range(self.k):
            w = self.p**i
            out += (((a // w) + (b // w)) % self.p) * w
        return out

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros_like(a)
        for i in range(self.k):
            w = self.p**i
            out += ((-(a // w)) % self.p) * w
        return out

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self.exp[(self.log[a] + self.log[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % self.order]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(int(self.log[a]) * e) % self.order])

    def prime_element(self, c: int) -> int:
        """Encoding of the prime-field element c mod p."""
        return int(c) % self.p

    def trace(self, x):
        return self.trace_of[np.asarray(x, dtype=np.int64)]

    def frobenius_trace(self, x: int) -> int:
        """x + x^p + ... + x^(p^(k-1)), computed by field arithmetic."""
        acc = 0
        y = int(x)
        for _ in range(self.k):
            acc = int(self.add(acc, y))
            y = self.power(y, self.p)
        if acc >= self.p:
            raise FieldError("trace left the prime field")  # pragma: no cover
        return acc


@lru_cache(maxsize=32)
def build_field(p: int, k: int = 1) -> ExtField:
    return ExtField(p, k)
