"""Diagonal non-degeneracy/ordinariness criteria and slope predictions.

Only facets whose restriction is diagonal (n terms, nonsingular vertex matrix)
are decided.  For those the determinant test for non-degeneracy is exact, but
the congruence test for ordinariness is only sufficient, so a third verdict,
``INCONCLUSIVE``, records the cases it does not settle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import det_exact, smith_normal_form
from .hodge import hodge_data
from .laurent import SYMBOLIC, LaurentPolySpec
from .polytope import FacetForm, Polytope, build_polytope


class UnsupportedError(ValueError):
    """Some off-origin facet restriction is not diagonal."""


class NotOrdinaryError(ValueError):
    """Slopes were requested for a polynomial not known to be ordinary."""


ORDINARY = "ordinary"
NOT_NON_DEGENERATE = "not-non-degenerate"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FacetRestriction:
    facet_id: int
    spec: LaurentPolySpec
    is_diagonal: bool


@dataclass(frozen=True)
class DiagonalReport:
    facet_id: int
    vertex_matrix: list[list[int]]  # columns are the exponent vectors
    det_abs: int
    invariant_factors: tuple[int, ...]

    @property
    def largest_factor(self) -> int:
        return self.invariant_factors[-1]


@dataclass(frozen=True)
class OrdinarinessVerdict:
    status: str
    reason: str
    prime: Optional[int] = None
    condition: Optional[str] = None
    facets: tuple = field(default=())

    @property
    def ordinary(self) -> bool:
        return self.status == ORDINARY


def facet_restriction(f: LaurentPolySpec, facet: FacetForm, facet_id: int = 0) -> FacetRestriction:
    on = [e for e in f.exponents if facet(e) == 1]
    sub = f.restrict(on)
    diag = len(on) == f.n and det_exact([[e[i] for e in on] for i in range(f.n)]) != 0
    return FacetRestriction(facet_id, sub, diag)


def diagonal_report(r: FacetRestriction) -> DiagonalReport:
    if not r.is_diagonal:
        raise UnsupportedError(f"facet {r.facet_id} restriction is not diagonal")
    exps = r.spec.exponents
    M = [[e[i] for e in exps] for i in range(r.spec.n)]
    snf = smith_normal_form(M)
    return DiagonalReport(r.facet_id, M, abs(det_exact(M)), snf.diag)


def diagonal_nondegenerate(rep: DiagonalReport, p: int) -> bool:
    return math.gcd(p, rep.det_abs) == 1


def diagonal_ordinary_verdict(rep: DiagonalReport, p: int) -> OrdinarinessVerdict:
    dn = rep.largest_factor
    if not diagonal_nondegenerate(rep, p):
        return OrdinarinessVerdict(NOT_NON_DEGENERATE, f"p={p} divides |det M|={rep.det_abs}", p)
    if dn == 1 or p % dn == 1:
        cond = "unimodular" if dn == 1 else f"p = 1 mod {dn}"
        return OrdinarinessVerdict(ORDINARY, f"p does not divide {rep.det_abs} and {cond}", p, cond)
    return OrdinarinessVerdict(
        INCONCLUSIVE,
        f"p={p} is not 1 mod d_n={dn}; the congruence criterion is only sufficient",
        p,
        f"p = 1 mod {dn}",
    )


def facet_reports(f: LaurentPolySpec, P: Optional[Polytope] = None) -> list[DiagonalReport]:
    P = P or build_polytope(f)
    reports = []
    for i, h in enumerate(P.facets_off_origin):
        r = facet_restriction(f, h, i)
        if not r.is_diagonal:
            raise UnsupportedError(
                f"facet {i} (equation coefficients {[str(e) for e in h.coeffs]}) carries "
                f"{len(r.spec.terms)} terms and is not diagonal"
            )
        reports.append(diagonal_report(r))
    return reports


def global_ordinariness(f: LaurentPolySpec, p: int, P: Optional[Polytope] = None) -> OrdinarinessVerdict:
    """Ordinary iff every off-origin facet restriction is; raises UnsupportedError otherwise."""
    reports = facet_reports(f, P)
    verdicts = tuple((rep, diagonal_ordinary_verdict(rep, p)) for rep in reports)
    bad = [v for _, v in verdicts if v.status == NOT_NON_DEGENERATE]
    if bad:
        return OrdinarinessVerdict(NOT_NON_DEGENERATE, bad[0].reason, p, facets=verdicts)
    unsure = [(r, v) for r, v in verdicts if v.status == INCONCLUSIVE]
    if unsure:
        r, v = unsure[0]
        return OrdinarinessVerdict(INCONCLUSIVE, f"facet {r.facet_id}: {v.reason}", p, v.condition, verdicts)
    return OrdinarinessVerdict(ORDINARY, f"all {len(reports)} facets ordinary at p={p}", p, facets=verdicts)


@dataclass(frozen=True)
class SlopePrediction:
    slopes: tuple[tuple[Fraction, int], ...]  # (slope, multiplicity), multiplicity > 0
    shift: Fraction = Fraction(0)
    dropped_unit_root: bool = False

    def multiset(self) -> list[Fraction]:
        return [s for s, m in self.slopes for _ in range(m)]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.slopes)


def predicted_slopes(
    f: LaurentPolySpec,
    p: int,
    shift: Fraction = Fraction(0),
    drop_unit_root: bool = False,
    P: Optional[Polytope] = None,
) -> SlopePrediction:
    """Newton slopes k/D with multiplicity H(k), for an ordinary ``f``.

    ``drop_unit_root`` removes the trivial slope-0 root sitting at the origin
    vertex before every slope is moved by ``shift``; with ``shift=-1`` this
    gives the slopes of L(T) = L*(T/q) / (1 - T/q).
    """
    P = P or build_polytope(f)
    verdict = global_ordinariness(f, p, P)
    if not verdict.ordinary:
        raise NotOrdinaryError(f"cannot predict slopes: verdict is {verdict.status} ({verdict.reason})")
    hd = hodge_data(P)
    mult = {Fraction(k, hd.D): h for k, h in enumerate(hd.H) if h}
    if drop_unit_root:
        if not P.origin_is_vertex:
            raise ValueError("no trivial unit root: the origin is not a vertex")
        mult[Fraction(0)] -= 1
    shift = Fraction(shift)
    slopes = tuple((s + shift, m) for s, m in sorted(mult.items()) if m > 0)
    return SlopePrediction(slopes, shift, drop_unit_root)


@dataclass(frozen=True)
class TrivialUnitRoot:
    """The factor 1 - zeta_p^t T; ``t`` is None when the constant term is symbolic."""

    t: Optional[int]
    p: Optional[int]

    def describe(self) -> str:
        if self.t is None:
            return "1 - psi(Tr(c)) T"
        if self.t == 0:
            return "1 - T"
        return f"1 - zeta_{self.p}^{self.t} T"


def trivial_unit_root_descriptor(f: LaurentPolySpec, p: Optional[int] = None) -> Optional[TrivialUnitRoot]:
    """Factor contributed by the origin vertex; None when the origin is not a vertex."""
    P = build_polytope(f)
    if not P.origin_is_vertex:
        return None
    p = p if p is not None else f.p
    c = f.constant_term()
    if c is None:
        return TrivialUnitRoot(0, p)
    if c is SYMBOLIC or p is None:
        return TrivialUnitRoot(None, p)
    # coefficients live in the prime field, where the trace is the identity
    return TrivialUnitRoot(c % p, p)
