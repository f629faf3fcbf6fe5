"""Exact integer and rational linear algebra.

Everything here works over Python ints and :class:`fractions.Fraction`, so no
step ever rounds.  Matrices are plain lists of rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

Matrix = list[list[int]]


def _check_rect(M: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    return rows, cols


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    _, inner = _check_rect(A)
    if inner != len(B):
        raise ValueError("shape mismatch in matmul")
    cols = len(B[0]) if B else 0
    return [[sum(row[t] * B[t][j] for t in range(inner)) for j in range(cols)] for row in A]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*M)]


def det_exact(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss fraction-free elimination."""
    n, m = _check_rect(M)
    if n != m:
        raise ValueError(f"determinant needs a square matrix, got {n}x{m}")
    if n == 0:
        return 1
    A = [[int(x) for x in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pivot = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                A[i][j] = (A[i][j] * pivot - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = pivot
    return sign * A[n - 1][n - 1]


@dataclass(frozen=True)
class SnfResult:
    """Smith form ``left @ M @ right == diag(diag)`` with unimodular transforms."""

    diag: tuple[int, ...]
    left: Matrix
    right: Matrix

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d != 0)


def smith_normal_form(M: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form by integer row/column reduction.

    Row operations are mirrored into ``left`` and column operations into
    ``right``, so the returned transforms reproduce the diagonal exactly.
    """
    rows, cols = _check_rect(M)
    A = [[int(x) for x in row] for row in M]
    L = identity(rows)
    R = identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < rows and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]

    diag = tuple(A[i][i] for i in range(min(rows, cols)))
    return SnfResult(diag=diag, left=L, right=R)


def lcm_of_denominators(xs: Sequence) -> int:
    if not xs:
        raise ValueError("lcm of an empty list is undefined")
    out = 1
    for x in xs:
        out = math.lcm(out, Fraction(x).denominator)
    return out


# -- rational row reduction ------------------------------------------------


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points``; -1 for the empty set."""
    if not points:
        return -1
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


def nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Basis of the right kernel of ``M`` over Q."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique solution of the square nonsingular system ``M x = b``."""
    n = len(M)
    aug = [list(row) + [b[i]] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [R[i][n] for i in range(n)]


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    den = lcm_of_denominators(list(v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


# -- exact simplex ------------------------------------------------------------


class LpStatus:
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """Minimise ``c @ x`` subject to ``A @ x == b`` and ``x >= 0``."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    @classmethod
    def of(cls, A, b, c) -> "LpProblem":
        A = tuple(tuple(Fraction(x) for x in row) for row in A)
        b = tuple(Fraction(x) for x in b)
        c = tuple(Fraction(x) for x in c)
        if len(A) != len(b):
            raise ValueError("A and b disagree on the number of constraints")
        if any(len(row) != len(c) for row in A):
            raise ValueError("A and c disagree on the number of variables")
        return cls(A, b, c)


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Optional[Fraction] = None
    witness: Optional[tuple[Fraction, ...]] = field(default=None)

    @property
    def optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    inv = 1 / T[r][c]
    T[r] = [x * inv for x in T[r]]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = c


def _run_simplex(T, basis, cost_row: int, allowed: int) -> bool:
    """Bland's-rule simplex on tableau ``T``; returns False when unbounded.

    The objective row stores reduced costs, the last column the right-hand side.
    Only columns ``< allowed`` may enter the basis.
    """
    m = len(basis)
    while True:
        obj = T[cost_row]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], enter)


def lp_solve(prob: LpProblem) -> LpResult:
    """Two-phase exact simplex with Bland's anti-cycling rule."""
    m = len(prob.A)
    nvar = len(prob.c)
    if m == 0:
        if any(c < 0 for c in prob.c):
            return LpResult(LpStatus.UNBOUNDED)
        return LpResult(LpStatus.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(nvar)))

    # phase 1 tableau: [A | I_art | b], artificial cost row, real cost row
    T: list[list[Fraction]] = []
    for row, rhs in zip(prob.A, prob.b):
        sgn = -1 if rhs < 0 else 1
        T.append([sgn * x for x in row] + [Fraction(0)] * m + [sgn * rhs])
    for i in range(m):
        T[i][nvar + i] = Fraction(1)
    basis = [nvar + i for i in range(m)]
    art = [Fraction(0)] * (nvar + m + 1)
    for i in range(m):
        art = [a - b for a, b in zip(art, T[i])]
    for i in range(m):
        art[nvar + i] = Fraction(0)
    real = list(prob.c) + [Fraction(0)] * (m + 1)
    T.append(real)
    T.append(art)
    art_row = m + 1

    _run_simplex(T, basis, art_row, nvar + m)
    if T[art_row][-1] != 0:
        return LpResult(LpStatus.INFEASIBLE)

    # drive remaining artificials out of the basis; rows that cannot pivot are redundant
    i = 0
    while i < len(basis):
        if basis[i] >= nvar:
            col = next((j for j in range(nvar) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T.pop()  # artificial objective
    cost_row = len(basis)
    T = [row[:nvar] + row[-1:] for row in T]

    if not _run_simplex(T, basis, cost_row, nvar):
        return LpResult(LpStatus.UNBOUNDED)
    x = [Fraction(0)] * nvar
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    value = sum((c * xi for c, xi in zip(prob.c, x)), Fraction(0))
    return LpResult(LpStatus.OPTIMAL, value, tuple(x))
