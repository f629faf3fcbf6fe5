"""End-to-end oracle runs: sums, reconstructed L-functions, and their checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..hodge import hodge_data
from ..laurent import LaurentPolySpec, has_g_shape, g_coefficients
from ..polytope import build_polytope
from .cyclotomic import Cyclotomic
from .field import build_field
from .lpoly import (
    LPolynomial,
    NewtonPolygon,
    PolygonComparison,
    WeightReport,
    BoundReport,
    bound_report,
    compare_polygons,
    complex_weights,
    conjugation_symmetry_check,
    derive_L_from_Lstar,
    l_from_power_sums,
    newton_polygon_of,
    strip_factors,
    trivial_factor_exponents,
    weil_cap_ok,
)
from .sums import (
    BRUTE_FORCE_BUDGET,
    FAST_PATH_CAP,
    BudgetExceeded,
    PaperInstance,
    constrained_from_s_star,
    constrained_sum,
    exp_sum_bruteforce,
    kloosterman3_table,
    s_star_fast,
)


def _as_instance(f: LaurentPolySpec, p: int) -> Optional[PaperInstance]:
    if not has_g_shape(f.with_prime(p)) or f.is_symbolic:
        return None
    a = tuple(int(x) % p for x in g_coefficients(f))
    if any(x == 0 for x in a):
        return None
    return PaperInstance(p, a)


def can_compute(f: LaurentPolySpec, p: int, k: int, fast: bool = True) -> bool:
    if fast and _as_instance(f, p) is not None and p**k - 1 <= FAST_PATH_CAP:
        return True
    return (p**k - 1) ** f.n <= BRUTE_FORCE_BUDGET and p**k <= 200_000


def exp_sums(f: LaurentPolySpec, p: int, kmax: int, fast: bool = True, twist: int = 1) -> list[Cyclotomic]:
    """S_1^*(f), ..., S_kmax^*(f); the Kloosterman split is used for g when ``fast``."""
    inst = _as_instance(f, p) if fast else None
    out = []
    for k in range(1, kmax + 1):
        if inst is not None and p**k - 1 <= FAST_PATH_CAP:
            out.append(s_star_fast(inst, k, twist, table=kloosterman3_table(build_field(p, k))))
        else:
            out.append(exp_sum_bruteforce(f, p, k, twist))
    return out


@dataclass
class Reconstruction:
    """L*(f,T)^((-1)^(n-1)) rebuilt from its first ``degree`` exponential sums."""

    f: LaurentPolySpec
    p: int
    degree: int
    sums: list[Cyclotomic]
    L: LPolynomial
    overdetermined: Optional[bool]  # None when no extra sum was affordable
    newton: NewtonPolygon
    hodge_vertices: tuple
    comparison: PolygonComparison
    weights: WeightReport


def reconstruct(f: LaurentPolySpec, p: int, fast: bool = True, extra: int = 1, twist: int = 1) -> Reconstruction:
    """Rebuild the L-polynomial of a non-degenerate ``f`` at the prime ``p``.

    The degree comes from the polytope; ``extra`` further sums are computed
    when affordable and must be consistent with that degree.
    """
    P = build_polytope(f)
    hd = hodge_data(P)
    d = hd.degree
    if not can_compute(f, p, d, fast):
        raise BudgetExceeded(f"S_{d} at p={p} is over budget")
    kmax = d
    while kmax < d + extra and can_compute(f, p, kmax + 1, fast):
        kmax += 1
    sums = exp_sums(f, p, kmax, fast, twist)
    sign = (-1) ** f.n
    L = l_from_power_sums(sums, d, p, root_sign=sign)
    over = True if kmax > d else None
    newton = newton_polygon_of(L, p)
    hv = tuple((x, Fraction(y)) for x, y in hd.hp_vertices)
    return Reconstruction(
        f, p, d, sums, L, over, newton, hv, compare_polygons(newton.vertices, hv), complex_weights(L, p)
    )


@dataclass
class InstanceRun:
    inst: PaperInstance
    kmax: int
    s_star: list[Cyclotomic]
    s: list[Cyclotomic]
    brute_agreement: dict[int, bool]
    identity_agreement: dict[int, bool]
    Lstar: Optional[LPolynomial] = None
    L_subst: Optional[LPolynomial] = None
    L_direct: Optional[LPolynomial] = None
    Lstar_trivial: list[int] = field(default_factory=list)
    L_trivial: list[int] = field(default_factory=list)
    Lstar_newton: Optional[NewtonPolygon] = None
    L_newton: Optional[NewtonPolygon] = None
    Lstar_weights: Optional[WeightReport] = None
    L_weights: Optional[WeightReport] = None
    Lstar_nontrivial_weights: Optional[WeightReport] = None
    L_nontrivial_weights: Optional[WeightReport] = None
    bound: Optional[BoundReport] = None
    conjugation_fixed: Optional[bool] = None
    weil_cap: Optional[bool] = None

    @property
    def complete(self) -> bool:
        return self.Lstar is not None


def instance_run(
    inst: PaperInstance,
    kmax: int = 9,
    brute_check: int = 3,
    identity_check: int = 2,
    twist: int = 1,
    fast: bool = True,
) -> InstanceRun:
    """Compute S_k^*(g) and S_k(a) for k <= kmax and, if kmax >= 9, both L-functions.

    ``kmax`` is silently clipped to what the chosen path can afford; without
    ``fast`` only direct enumeration is used.
    """
    p = inst.p
    g = inst.polynomial()
    if fast:
        affordable = [k for k in range(1, 40) if p**k - 1 <= FAST_PATH_CAP]
    else:
        affordable = [k for k in range(1, 40) if (p**k - 1) ** 5 <= BRUTE_FORCE_BUDGET]
    kmax = min(kmax, max(affordable, default=0))
    if fast:
        s_star = [s_star_fast(inst, k, twist) for k in range(1, kmax + 1)]
    else:
        s_star = [exp_sum_bruteforce(g, p, k, twist) for k in range(1, kmax + 1)]
    s = [constrained_from_s_star(x, p, k) for k, x in enumerate(s_star, start=1)]

    brute = {}
    for k in range(1, min(brute_check, kmax) + 1) if fast else ():
        if (p**k - 1) ** 5 <= BRUTE_FORCE_BUDGET:
            brute[k] = exp_sum_bruteforce(g, p, k, twist) == s_star[k - 1]
    ident = {}
    for k in range(1, min(identity_check, kmax) + 1):
        if (p**k - 1) ** 4 <= BRUTE_FORCE_BUDGET:
            ident[k] = constrained_sum(inst, k, twist) * p**k - 1 == s_star[k - 1]

    run = InstanceRun(inst, kmax, s_star, s, brute, ident)
    run.bound = bound_report(s, p)
    run.weil_cap = weil_cap_ok(s_star, p, 8, 5)
    if kmax < 9:
        return run

    Lstar = l_from_power_sums(s_star, 9, p, root_sign=-1)
    run.Lstar = Lstar
    run.L_subst = derive_L_from_Lstar(Lstar, p)
    run.L_direct = l_from_power_sums(s, 8, p, root_sign=-1)
    run.Lstar_trivial = trivial_factor_exponents(Lstar, p, 2)
    run.L_trivial = trivial_factor_exponents(run.L_subst, p, 1)
    run.Lstar_newton = newton_polygon_of(Lstar, p)
    run.L_newton = newton_polygon_of(run.L_subst, p)
    run.Lstar_weights = complex_weights(Lstar, p)
    run.L_weights = complex_weights(run.L_subst, p)
    run.Lstar_nontrivial_weights = complex_weights(
        strip_factors(Lstar, [Fraction(p) ** e for e in run.Lstar_trivial]), p
    )
    run.L_nontrivial_weights = complex_weights(
        strip_factors(run.L_subst, [Fraction(p) ** e for e in run.L_trivial]), p
    )
    run.conjugation_fixed = conjugation_symmetry_check(Lstar) and all(x == x.conjugate() for x in s)
    return run


def nontrivial_moduli_ok(rep: WeightReport, q: int, weight: int, count: int) -> bool:
    """Every embedding has exactly ``count`` roots of modulus q^(weight/2) within tolerance."""
    target = q ** (weight / 2)
    for mods in rep.moduli.values():
        if len(mods) != count or any(abs(m - target) / target > 1e-6 for m in mods):
            return False
    return True


def slope_multiset(vals: Sequence[Fraction]) -> list[str]:
    return [str(Fraction(v)) for v in vals]
