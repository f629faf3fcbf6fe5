"""Exact exponential sums over finite fields with values in Z[zeta_p].

The additive character is psi(x) = zeta_p^(m x) for a twist m prime to p;
``twist=1`` is the default.  Every sum is first accumulated as a histogram of
trace values t in F_p, which is exactly the Z[x]/(x^p - 1) representative of
sum zeta^t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..laurent import SYMBOLIC, LaurentPolySpec
from .cyclotomic import MAX_CYCLOTOMIC_PRIME_GAP, Cyclotomic
from .field import ExtField, build_field

BRUTE_FORCE_BUDGET = 10**8
FAST_PATH_CAP = 20_000
_CHUNK = 1 << 20


class BudgetExceeded(RuntimeError):
    pass


def _check_prime(p: int) -> None:
    if p - 1 > MAX_CYCLOTOMIC_PRIME_GAP:
        raise ValueError(f"cyclotomic layer supports p - 1 <= {MAX_CYCLOTOMIC_PRIME_GAP}, got p={p}")


def _twisted(counts: Sequence[int], p: int, twist: int) -> Cyclotomic:
    return Cyclotomic.from_exponent_counts(p, counts).galois(twist) if twist % p != 1 else (
        Cyclotomic.from_exponent_counts(p, counts)
    )


def exp_sum_bruteforce(f: LaurentPolySpec, p: int, k: int, twist: int = 1) -> Cyclotomic:
    """sum over the torus (F_{p^k}^*)^n of psi(Tr f(x)), by direct enumeration."""
    _check_prime(p)
    if f.is_symbolic:
        raise ValueError("brute force needs concrete coefficients")
    F = build_field(p, k)
    N = F.order
    total = N**f.n
    if total > BRUTE_FORCE_BUDGET:
        raise BudgetExceeded(
            f"{total} torus points exceed the brute-force budget {BRUTE_FORCE_BUDGET}; use the fast path"
        )
    coeff_logs = []
    for c, _ in f.terms:
        if c % p == 0:
            raise ValueError(f"coefficient {c} vanishes mod {p}")
        coeff_logs.append(int(F.log[F.prime_element(c)]))
    exps = np.array(f.exponents, dtype=np.int64)  # J x n
    counts = np.zeros(p, dtype=np.int64)
    # log(a_j x^V_j) = log a_j + V_j . m with m the vector of discrete logs
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        m = np.empty((len(idx), f.n), dtype=np.int64)
        rest = idx.copy()
        for i in range(f.n):
            m[:, i] = rest % N
            rest //= N
        logs = (m @ exps.T + np.array(coeff_logs)) % N
        tr = F.trace_by_log[logs].sum(axis=1) % p
        counts += np.bincount(tr, minlength=p)
    return _twisted(counts, p, twist)


@dataclass(frozen=True)
class PaperInstance:
    """Coefficients a1..a6 in F_p^* of the constrained sum and of g."""

    p: int
    a: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) != 6:
            raise ValueError("exactly six coefficients a1..a6 are required")
        if any(x % self.p == 0 for x in self.a):
            raise ValueError(f"coefficients must be nonzero mod {self.p}")

    @classmethod
    def ones(cls, p: int) -> "PaperInstance":
        return cls(p, (1,) * 6)

    def polynomial(self) -> LaurentPolySpec:
        from ..laurent import g_polynomial

        return g_polynomial([x % self.p for x in self.a], p=self.p)


def constrained_sum(inst: PaperInstance, k: int, twist: int = 1) -> Cyclotomic:
    """S_k(a): sum over x1..x4 in F* with a5/(x1x2) + a6/(x3x4) = 1 of psi(Tr(a1x1+...+a4x4))."""
    p = inst.p
    _check_prime(p)
    F = build_field(p, k)
    N = F.order
    if N**4 > BRUTE_FORCE_BUDGET:
        raise BudgetExceeded(f"{N**4} tuples exceed the brute-force budget {BRUTE_FORCE_BUDGET}")
    a = [int(F.log[F.prime_element(x)]) for x in inst.a]
    one = F.prime_element(1)
    counts = np.zeros(p, dtype=np.int64)
    r = np.arange(N, dtype=np.int64)
    m3, m4 = np.meshgrid(r, r, indexing="ij")
    m3, m4 = m3.ravel(), m4.ravel()
    v = F.exp[(a[5] - m3 - m4) % N]  # a6 / (x3 x4)
    tr34 = (F.trace_by_log[(a[2] + m3) % N] + F.trace_by_log[(a[3] + m4) % N]) % p
    for m1 in range(N):
        u = F.exp[(a[4] - m1 - r) % N]  # a5 / (x1 x2), one entry per x2
        tr12 = (F.trace_by_log[(a[0] + m1) % N] + F.trace_by_log[(a[1] + r) % N]) % p
        hit = F.add(u[:, None], v[None, :]) == one
        tr = (tr12[:, None] + tr34[None, :]) % p
        counts += np.bincount(tr[hit], minlength=p)
    return _twisted(counts, p, twist)


class KloostermanTable:
    """Kl3(t) = sum_{y1 y2 y3 = t} psi(Tr(y1 + y2 + y3)) for every t in F_q^*.

    ``counts[m]`` holds integers c_j with Kl3(g^m) = sum_j c_j zeta^j; they are
    reduced representatives rather than raw triple counts.
    """

    def __init__(self, field: ExtField):
        self.field = field
        p, N = field.p, field.order
        ind = np.zeros((p, N), dtype=np.int64)
        ind[field.trace_by_log, np.arange(N)] = 1
        kl2 = _cyclic_self_convolve(ind, ind, p, N)
        self.counts = _cyclic_self_convolve(kl2, ind, p, N).T.copy()

    def __len__(self):
        return self.field.order

    def by_log(self, m: int) -> Cyclotomic:
        return Cyclotomic.from_exponent_counts(self.field.p, self.counts[m % self.field.order])

    def __getitem__(self, t: int) -> Cyclotomic:
        if t == 0:
            raise KeyError("Kl3 is defined on F_q^* only")
        return self.by_log(int(self.field.log[t]))


def _cyclic_self_convolve(A: np.ndarray, B: np.ndarray, p: int, N: int) -> np.ndarray:
    """(A * B)[c, m] = sum over j1 + j2 = c (mod p), m1 + m2 = m (mod N) of A[j1, m1] B[j2, m2].

    Rows are first reduced against zeta^(p-1) = -(1 + ... + zeta^(p-2)), so the
    result is a different but equivalent representative with a zero last row.
    """
    A = A - A[-1]
    B = B - B[-1]
    out = np.zeros((p, N), dtype=np.int64)
    for j1 in range(p - 1):
        for j2 in range(p - 1):
            full = np.convolve(A[j1], B[j2])
            folded = full[:N].copy()
            folded[: len(full) - N] += full[N:]
            out[(j1 + j2) % p] += folded
    return out


def kloosterman3_table(field: ExtField) -> KloostermanTable:
    return KloostermanTable(field)


def s_star_fast(inst: PaperInstance, k: int, twist: int = 1, table: KloostermanTable | None = None) -> Cyclotomic:
    """S_k^*(g) = sum_{x5} Kl3(a1 a2 a5 x5) Kl3(a3 a4 a6 x5) psi(Tr(-x5))."""
    p = inst.p
    _check_prime(p)
    F = build_field(p, k)
    N = F.order
    if N > FAST_PATH_CAP:
        raise BudgetExceeded(f"q^k - 1 = {N} exceeds the fast-path cap {FAST_PATH_CAP}")
    table = table or kloosterman3_table(F)
    lg = [int(F.log[F.prime_element(x)]) for x in inst.a]
    r = np.arange(N, dtype=np.int64)
    left = table.counts[(lg[0] + lg[1] + lg[4] + r) % N]  # N x p
    right = table.counts[(lg[2] + lg[3] + lg[5] + r) % N]
    # reduce both factors so that the zeta^(p-1) slot is zero; keeps products small
    left = left - left[:, -1:]
    right = right - right[:, -1:]
    shift = F.trace_by_log[(r + int(F.log[F.neg(1)])) % N]  # Tr(-x5)
    acc = [0] * p
    for j1 in range(p - 1):
        for j2 in range(p - 1):
            prod = left[:, j1].astype(object) * right[:, j2].astype(object)
            slots = (j1 + j2 + shift) % p
            for s in range(p):
                acc[s] += int(prod[slots == s].sum())
    return _twisted(acc, p, twist)


def s_star_sequence(inst: PaperInstance, kmax: int, fast: bool = True, twist: int = 1) -> list[Cyclotomic]:
    """S_1^*(g), ..., S_kmax^*(g)."""
    out = []
    g = inst.polynomial()
    for k in range(1, kmax + 1):
        out.append(s_star_fast(inst, k, twist) if fast else exp_sum_bruteforce(g, inst.p, k, twist))
    return out


def constrained_from_s_star(s_star: Cyclotomic, q: int, k: int) -> Cyclotomic:
    """S_k(a) = (1 + S_k^*(g)) / q^k."""
    return (s_star + 1) / (q**k)


def concrete(f: LaurentPolySpec) -> bool:
    return all(c is not SYMBOLIC for c in f.coefficients)
