"""Evaluation of the conjectural weight counts attached to the faces of Delta through 0.

For 0 <= k <= n the conjecture predicts the number of reciprocal roots of
weight k as an alternating sum over faces sigma of Delta through the origin,

    w_k = (-1)^k sum_{dim sigma <= k} (-1)^{dim sigma}
          (F_sigma(k) + F_sigma(k-1) - C(n - dim sigma, n - k + 1)) (dim sigma)! V(sigma)

with F_sigma(i) the number of i-dimensional faces containing sigma.
Conventions: F_sigma(i) counts sigma itself and counts Delta when i = n,
F_sigma(-1) = 0, out-of-range binomials vanish, and the normalised volume of
the vertex {0} is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .polytope import Face, Polytope, lattice_normalized_volume


class ConjectureEvaluationError(ArithmeticError):
    pass


def binom(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


@dataclass(frozen=True)
class FaceVolumeEntry:
    face: Face
    dim: int
    norm_vol: int


@dataclass(frozen=True)
class ConjectureReport:
    k: int
    conjectured: int
    reference: Optional[int] = None
    provenance: Optional[str] = None

    @property
    def agree(self) -> Optional[bool]:
        return None if self.reference is None else self.reference == self.conjectured


def face_normalized_volume(P: Polytope, face: Face) -> int:
    if not face.contains_origin:
        raise ValueError("face does not contain the origin")
    if face.dim == 0:
        return 1
    return lattice_normalized_volume(P, face)


def faces_above(P: Polytope, face: Face, i: int) -> int:
    """F_sigma(i): number of i-dimensional faces containing ``face`` (itself included)."""
    if i < 0:
        return 0
    return sum(1 for f in P.lattice.containing(face) if f.dim == i)


def origin_face_volumes(P: Polytope) -> list[FaceVolumeEntry]:
    P.require_full_dimension()
    return [
        FaceVolumeEntry(f, f.dim, face_normalized_volume(P, f)) for f in P.lattice if f.contains_origin
    ]


def _sum(P: Polytope, k: int, entries: Sequence[FaceVolumeEntry]) -> int:
    n = P.n
    total = 0
    for e in entries:
        if e.dim > k:
            continue
        term = faces_above(P, e.face, k) + faces_above(P, e.face, k - 1) - binom(n - e.dim, n - k + 1)
        total += (-1) ** e.dim * term * e.norm_vol
    return (-1) ** k * total


def conjectured_weight_count(
    P: Polytope, k: int, reference: Optional[int] = None, provenance: Optional[str] = None
) -> ConjectureReport:
    if not 0 <= k <= P.n:
        raise ValueError(f"k must lie in 0..{P.n}")
    value = _sum(P, k, origin_face_volumes(P))
    if not isinstance(value, int):
        raise ConjectureEvaluationError(f"non-integral conjectured count {value!r} at k={k}")
    return ConjectureReport(k, value, reference, provenance)


def conjectured_weights(P: Polytope) -> list[int]:
    entries = origin_face_volumes(P)
    return [_sum(P, k, entries) for k in range(P.n + 1)]


def counterexample_report(
    P: Polytope, reference: Sequence[int], provenance: str = "reference"
) -> list[ConjectureReport]:
    """Compare conjectured counts with a reference weight ledger for k = 0..n."""
    if len(reference) != P.n + 1:
        raise ValueError(f"reference ledger needs {P.n + 1} entries, got {len(reference)}")
    return [
        ConjectureReport(k, w, int(reference[k]), provenance)
        for k, w in enumerate(conjectured_weights(P))
    ]
