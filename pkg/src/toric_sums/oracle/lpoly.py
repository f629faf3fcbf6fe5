"""L-polynomials over Q(zeta_p): reconstruction, exact slopes, complex weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from ..hodge import INFINITE
from .cyclotomic import Cyclotomic, CyclotomicLike, ord_q

MODULUS_RTOL = 1e-6
BOUND_SLACK = 1e-9
MAX_ROOT_DEGREE = 12


class LInconsistencyError(ArithmeticError):
    """Exact data contradicts the assumed shape of an L-function."""


class RootFindingError(RuntimeError):
    pass


def _cyc(p: int, x: CyclotomicLike) -> Cyclotomic:
    return x if isinstance(x, Cyclotomic) else Cyclotomic.from_int(p, x)


@dataclass
class LPolynomial:
    """c_0 + c_1 T + ... + c_d T^d with c_0 = 1 and c_d != 0.

    ``slopes`` and ``moduli`` are filled in by :func:`annotate`.
    """

    p: int
    coeffs: tuple[Cyclotomic, ...]
    slopes: Optional[list[Fraction]] = None
    moduli: Optional[dict[int, list[float]]] = None

    def __post_init__(self):
        cs = [_cyc(self.p, c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        if not cs or cs[0] != 1:
            raise LInconsistencyError("constant coefficient must be 1")
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, p: int, coeffs: Sequence) -> "LPolynomial":
        return cls(p, tuple(Cyclotomic.from_int(p, c) for c in coeffs))

    @classmethod
    def from_linear_factors(cls, p: int, roots: Sequence[CyclotomicLike]) -> "LPolynomial":
        """prod (1 - r T)."""
        out = cls.from_ints(p, [1])
        for r in roots:
            out = out.times_linear(r)
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def times_linear(self, r: CyclotomicLike) -> "LPolynomial":
        r = _cyc(self.p, r)
        cs = list(self.coeffs) + [Cyclotomic.from_int(self.p, 0)]
        out = [cs[0]] + [cs[k] - r * self.coeffs[k - 1] for k in range(1, len(cs))]
        return LPolynomial(self.p, tuple(out))

    def divide_linear(self, r: CyclotomicLike) -> "LPolynomial":
        """Exact quotient by (1 - r T); raises if it does not divide."""
        r = _cyc(self.p, r)
        d = self.degree
        if d == 0:
            raise LInconsistencyError("a constant cannot be divided by a linear factor")
        q = [self.coeffs[0]]
        for k in range(1, d):
            q.append(self.coeffs[k] + r * q[-1])
        if not (self.coeffs[d] + r * q[-1]).is_zero():
            raise LInconsistencyError(f"(1 - ({r}) T) does not divide the polynomial")
        return LPolynomial(self.p, tuple(q))

    def divides_by(self, r: CyclotomicLike) -> bool:
        try:
            self.divide_linear(r)
        except LInconsistencyError:
            return False
        return True

    def scale_variable(self, s: CyclotomicLike) -> "LPolynomial":
        """L(s T)."""
        s = _cyc(self.p, s)
        acc, out = Cyclotomic.from_int(self.p, 1), []
        for c in self.coeffs:
            out.append(c * acc)
            acc = acc * s
        return LPolynomial(self.p, tuple(out))

    def power_sums(self, count: int) -> list[Cyclotomic]:
        """sum gamma^k for k = 1..count over the reciprocal roots gamma."""
        return power_sums(self, count)

    def is_self_conjugate(self) -> bool:
        return conjugation_symmetry_check(self)

    def to_document(self) -> dict:
        return {
            "p": self.p,
            "degree": self.degree,
            "coeffs": [[str(c) for c in x.coords] for x in self.coeffs],
        }


def l_from_power_sums(sums: Sequence[CyclotomicLike], d: int, p: Optional[int] = None, root_sign: int = -1) -> LPolynomial:
    """Polynomial prod (1 - gamma T) of degree d whose roots have sum gamma^k = root_sign * S_k.

    ``root_sign=-1`` is the case L = exp(sum S_k T^k / k); use +1 for the
    reciprocal L^{-1}.  Any sums beyond the first d are treated as an
    over-determination check: the coefficients they imply past degree d must vanish.
    """
    if len(sums) < d:
        raise ValueError(f"need {d} power sums, got {len(sums)}")
    if root_sign not in (1, -1):
        raise ValueError("root_sign must be +1 or -1")
    if p is None:
        p = next((s.p for s in sums if isinstance(s, Cyclotomic)), None)
        if p is None:
            raise ValueError("prime could not be inferred from integer power sums")
    ps = [_cyc(p, s) * root_sign for s in sums]
    c = [Cyclotomic.from_int(p, 1)]
    for k in range(1, len(ps) + 1):
        acc = Cyclotomic.from_int(p, 0)
        for i in range(1, k + 1):
            if k - i < len(c):
                acc = acc + c[k - i] * ps[i - 1]
        ck = acc * Fraction(-1, k)
        if k > d:
            if not ck.is_zero():
                raise LInconsistencyError(f"power sum S_{k} is inconsistent with degree {d}")
        c.append(ck)
    return LPolynomial(p, tuple(c[: d + 1]))


def power_sums(L: LPolynomial, count: int) -> list[Cyclotomic]:
    p, d = L.p, L.degree
    cs = list(L.coeffs)
    zero = Cyclotomic.from_int(p, 0)
    out: list[Cyclotomic] = []
    for k in range(1, count + 1):
        acc = L.coeffs[k] * (-k) if k <= d else zero
        for i in range(1, min(k, d + 1)):
            acc = acc - cs[i] * out[k - i - 1]
        out.append(acc)
    return out


def s_values(L: LPolynomial, count: int, root_sign: int = -1) -> list[Cyclotomic]:
    """Inverse of :func:`l_from_power_sums`: the S_k that produce L."""
    return [x * root_sign for x in power_sums(L, count)]


def derive_L_from_Lstar(Lstar: LPolynomial, q: int) -> LPolynomial:
    """L(T) = L*(T/q) / (1 - T/q), after checking that (1 - T) divides L*."""
    reduced = Lstar.divide_linear(1)
    return reduced.scale_variable(Fraction(1, q))


def trivial_factor_exponents(L: LPolynomial, q: int, max_power: int) -> list[int]:
    """Exponents e <= max_power, in order, such that prod (1 - q^e T) divides L exactly."""
    found, cur = [], L
    for e in range(max_power + 1):
        try:
            cur = cur.divide_linear(Fraction(q) ** e)
        except LInconsistencyError:
            continue
        found.append(e)
    return found


def strip_factors(L: LPolynomial, roots: Sequence[CyclotomicLike]) -> LPolynomial:
    for r in roots:
        L = L.divide_linear(r)
    return L


# --- slopes ---------------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[Fraction, ...]  # multiset, ascending

    def value_at(self, x: int) -> Fraction:
        return polygon_value(self.vertices, x)


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_of(L: LPolynomial, q: int) -> NewtonPolygon:
    if q != L.p:
        raise ValueError("only prime base fields q = p are supported")
    pts = []
    for k, c in enumerate(L.coeffs):
        v = ord_q(c)
        if v is not INFINITE:
            pts.append((k, v))
    hull = _lower_hull(pts)
    slopes: list[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes += [Fraction(y2 - y1, x2 - x1)] * (x2 - x1)
    return NewtonPolygon(tuple(hull), tuple(slopes))


def polygon_value(vertices: Sequence[tuple[int, Fraction]], x: int) -> Fraction:
    """Piecewise-linear interpolation through ``vertices`` (sorted by abscissa)."""
    for (x1, y1), (x2, y2) in zip(vertices, vertices[1:]):
        if x1 <= x <= x2:
            return Fraction(y1) + Fraction(y2 - y1) * (x - x1) / (x2 - x1)
    if len(vertices) == 1 and vertices[0][0] == x:
        return Fraction(vertices[0][1])
    raise ValueError(f"{x} lies outside the polygon")


@dataclass(frozen=True)
class PolygonComparison:
    lies_above: bool
    coincide: bool
    same_endpoints: bool


def compare_polygons(newton: Sequence[tuple[int, Fraction]], hodge: Sequence[tuple[int, Fraction]]) -> PolygonComparison:
    """Check NP >= HP at every integer abscissa and whether the two coincide."""
    end = newton[-1][0]
    same_end = end == hodge[-1][0] and Fraction(newton[-1][1]) == Fraction(hodge[-1][1])
    if end != hodge[-1][0]:
        return PolygonComparison(False, False, False)
    diffs = [polygon_value(newton, x) - polygon_value(hodge, x) for x in range(end + 1)]
    return PolygonComparison(all(d >= 0 for d in diffs), all(d == 0 for d in diffs), same_end)


# --- complex weights ------------------------------------------------------------


@dataclass
class WeightReport:
    q: int
    moduli: dict[int, list[float]]  # embedding m -> sorted root moduli
    weights: dict[int, list[int]]
    max_relative_error: float

    @property
    def within_tolerance(self) -> bool:
        return self.max_relative_error <= MODULUS_RTOL

    def histogram(self, top: Optional[int] = None) -> list[int]:
        """Number of roots of each weight 0..top, in the first embedding."""
        ws = self.weights[min(self.weights)]
        top = max(ws, default=0) if top is None else top
        return [ws.count(w) for w in range(top + 1)]

    def consistent_across_embeddings(self) -> bool:
        return len({tuple(w) for w in self.weights.values()}) == 1


def _roots(coeffs: list, dps: int) -> list:
    # highest degree first: [c_0, ..., c_d] lists X^d L(1/X), whose roots are the gammas
    last_err = None
    for maxsteps, extra in ((100, 40), (400, 120), (2000, 300)):
        try:
            return mpmath.polyroots(coeffs, maxsteps=maxsteps, extraprec=extra)
        except mpmath.libmp.libhyper.NoConvergence as err:
            last_err = err
    raise RootFindingError(f"root finder did not converge: {last_err}")


def complex_weights(L: LPolynomial, q: Optional[int] = None, dps: int = 50) -> WeightReport:
    q = q or L.p
    if L.degree > MAX_ROOT_DEGREE:
        raise ValueError(f"degree {L.degree} exceeds the supported {MAX_ROOT_DEGREE}")
    moduli: dict[int, list[float]] = {}
    weights: dict[int, list[int]] = {}
    worst = 0.0
    with mpmath.workdps(dps):
        logq = mpmath.log(q)
        for m in range(1, L.p):
            cs = [c.embed(m) for c in L.coeffs]
            rs = _roots(cs, dps) if L.degree else []
            mods = sorted(float(abs(r)) for r in rs)
            ws = []
            for r in rs:
                a = abs(r)
                w = int(round(float(2 * mpmath.log(a) / logq)))
                ws.append(w)
                target = mpmath.power(q, mpmath.mpf(w) / 2)
                worst = max(worst, float(abs(a - target) / target))
            moduli[m] = mods
            weights[m] = sorted(ws)
    L.moduli = moduli
    return WeightReport(q, moduli, weights, worst)


def conjugation_symmetry_check(L: LPolynomial) -> bool:
    return all(c == c.conjugate() for c in L.coeffs)


def annotate(L: LPolynomial, q: Optional[int] = None) -> LPolynomial:
    q = q or L.p
    L.slopes = list(newton_polygon_of(L, q).slopes)
    complex_weights(L, q)
    return L


# --- bound ---------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    k: int
    bound: float
    worst_modulus: float
    ok: bool


@dataclass
class BoundReport:
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def constrained_bound(q: int, k: int) -> float:
    """6 q^(3k/2) + q^k + 1."""
    return 6 * q ** (1.5 * k) + q**k + 1


def bound_report(values: Sequence[Cyclotomic], q: int) -> BoundReport:
    """Compare |S_k| with 6 q^(3k/2) + q^k + 1 in every embedding, k = 1.. len(values)."""
    rep = BoundReport()
    for k, s in enumerate(values, start=1):
        bound = constrained_bound(q, k)
        worst = max(float(abs(s.embed(m, dps=30))) for m in range(1, s.p))
        rep.checks.append(BoundCheck(k, bound, worst, worst <= bound * (1 + BOUND_SLACK)))
    return rep


def weil_cap_ok(values: Sequence[Cyclotomic], q: int, degree: int, max_weight: int) -> bool:
    """|S_k| <= degree * q^(max_weight k / 2) in every embedding."""
    for k, s in enumerate(values, start=1):
        cap = degree * math.pow(q, max_weight * k / 2)
        if any(float(abs(s.embed(m, dps=30))) > cap * (1 + BOUND_SLACK) for m in range(1, s.p)):
            return False
    return True
