"""Weight function, weight-level lattice counts, Hodge numbers and polygons."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .exact import LpProblem, det_exact, lp_solve
from .polytope import Polytope, denominator, normalized_volume


class _Infinity:
    """Weight of a lattice point outside the cone over Delta."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self


INFINITE = _Infinity()

Weight = Union[Fraction, _Infinity]


class HodgeConsistencyError(RuntimeError):
    """A computed Hodge number came out negative."""


def weight(P: Polytope, u: Sequence[int]) -> Weight:
    """Smallest total mass of a non-negative combination of nonzero vertices equal to ``u``."""
    P.require_full_dimension()
    gens = P.nonzero_vertices
    A = [[v[i] for v in gens] for i in range(P.n)]
    res = lp_solve(LpProblem.of(A, list(u), [1] * len(gens)))
    if not res.optimal:
        return INFINITE
    return res.value


def facet_weight(P: Polytope, u: Sequence[int]) -> Weight:
    """Weight read off the facet forms: max of the off-origin forms on the cone, else infinite."""
    if any(h(u) > 0 for h in P.facets_through_origin):
        return INFINITE
    return max([Fraction(0)] + [h(u) for h in P.facets_off_origin])


def _scaled_forms(P: Polytope) -> tuple[np.ndarray, np.ndarray, int]:
    D = denominator(P)
    off = np.array([[int(e * D) for e in h.coeffs] for h in P.facets_off_origin], dtype=np.int64)
    thr = np.array([h.coeffs for h in P.facets_through_origin], dtype=np.int64).reshape(-1, P.n)
    return off, thr, D


def scaled_weights(P: Polytope, points: np.ndarray) -> np.ndarray:
    """D * w(u) for each row of ``points``; -1 marks infinite weight."""
    off, thr, _ = _scaled_forms(P)
    pts = np.asarray(points, dtype=np.int64)
    w = np.maximum((pts @ off.T).max(axis=1), 0)
    if len(thr):
        outside = (pts @ thr.T > 0).any(axis=1)
        w = np.where(outside, -1, w)
    return w


def _box(P: Polytope, kmax: int) -> np.ndarray:
    D = denominator(P)
    lo, hi = [], []
    for i in range(P.n):
        coords = [v[i] for v in P.vertices] + [0]
        lo.append(math.floor(Fraction(kmax * min(coords), D)))
        hi.append(math.ceil(Fraction(kmax * max(coords), D)))
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def _points_by_box(P: Polytope, kmax: int) -> dict[int, list[tuple[int, ...]]]:
    pts = _box(P, kmax)
    w = scaled_weights(P, pts)
    out: dict[int, list[tuple[int, ...]]] = {k: [] for k in range(kmax + 1)}
    keep = (w >= 0) & (w <= kmax)
    for row, k in zip(pts[keep].tolist(), w[keep].tolist()):
        out[k].append(tuple(row))
    return out


def unimodular_pyramids(P: Polytope) -> bool:
    return all(
        len(h.vertex_ids) == P.n and abs(det_exact([list(P.vertices[i]) for i in sorted(h.vertex_ids)])) == 1
        for h in P.facets_off_origin
    )


def _points_by_cones(P: Polytope, kmax: int) -> dict[int, list[tuple[int, ...]]]:
    if not unimodular_pyramids(P):
        raise ValueError("cone enumeration needs every off-origin facet to be a unimodular simplex")
    out: dict[int, set] = {k: set() for k in range(kmax + 1)}
    for h in P.facets_off_origin:
        gens = [P.vertices[i] for i in sorted(h.vertex_ids)]
        for k in range(kmax + 1):
            # compositions of k into n non-negative parts via stars and bars
            for bars in itertools.combinations(range(k + P.n - 1), P.n - 1):
                parts, prev = [], -1
                for b in bars + (k + P.n - 1,):
                    parts.append(b - prev - 1)
                    prev = b
                out[k].add(tuple(sum(c * g[i] for c, g in zip(parts, gens)) for i in range(P.n)))
    return {k: sorted(v) for k, v in out.items()}


def count_weight_k(P: Polytope, k: int, strategy: str = "box") -> tuple[int, list[tuple[int, ...]]]:
    """Lattice points of weight exactly k/D.

    ``strategy="box"`` scans the bounding box of (k/D)Delta; ``"cones"``
    collects non-negative integer combinations of each unimodular facet's
    vertices and merges them.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    pts = weight_points(P, k, strategy)[k]
    return len(pts), pts


def weight_points(P: Polytope, kmax: int, strategy: str = "box") -> dict[int, list[tuple[int, ...]]]:
    P.require_full_dimension()
    if strategy == "box":
        return _points_by_box(P, kmax)
    if strategy == "cones":
        return _points_by_cones(P, kmax)
    raise ValueError(f"unknown counting strategy {strategy!r}")


def weight_counts(P: Polytope, kmax: int, strategy: str = "box") -> list[int]:
    pts = weight_points(P, kmax, strategy)
    return [len(pts[k]) for k in range(kmax + 1)]


def hodge_transform(W: Sequence[int], n: int, D: int) -> list[int]:
    """H(k) = sum_i (-1)^i C(n, i) W(k - iD) for k < len(W)."""
    return [
        sum((-1) ** i * math.comb(n, i) * W[k - i * D] for i in range(n + 1) if k - i * D >= 0)
        for k in range(len(W))
    ]


def inverse_hodge_transform(H: Sequence[int], n: int, D: int) -> list[int]:
    """W(k) = sum_i C(n-1+i, i) H(k - iD), the inverse of :func:`hodge_transform`."""
    return [
        sum(math.comb(n - 1 + i, i) * H[k - i * D] for i in range(k // D + 1))
        for k in range(len(H))
    ]


def hodge_numbers(P: Polytope, W: Optional[Sequence[int]] = None) -> list[int]:
    """H(0..nD); raises if any comes out negative."""
    D = denominator(P)
    top = P.n * D
    if W is None:
        W = weight_counts(P, top)
    H = hodge_transform(list(W)[: top + 1], P.n, D)
    bad = [k for k, h in enumerate(H) if h < 0]
    if bad:
        raise HodgeConsistencyError(f"negative Hodge number at k={bad[0]}: {H[bad[0]]}; weight counts are wrong")
    return H


def _cumulative_polygon(counts: Sequence[int], D: int) -> list[tuple[int, Fraction]]:
    pts = []
    x, y = 0, Fraction(0)
    for k, c in enumerate(counts):
        x += c
        y += Fraction(k * c, D)
        pts.append((x, y))
    return pts


def hodge_polygon(P: Polytope, H: Optional[Sequence[int]] = None):
    """Vertices (0,0), Q_0, Q_1, ... with repeats dropped, and the break points."""
    D = denominator(P)
    if H is None:
        H = hodge_numbers(P)
    Q = _cumulative_polygon(H, D)
    verts = [(0, Fraction(0))]
    for q in Q:
        if q != verts[-1]:
            verts.append(q)
    breaks = [Q[k] for k in range(1, len(H) - 1) if H[k + 1] != 0]
    return verts, breaks


def chain_polygon(P: Polytope, kmax: int, W: Optional[Sequence[int]] = None) -> list[tuple[int, Fraction]]:
    D = denominator(P)
    if W is None:
        W = weight_counts(P, kmax)
    return [(0, Fraction(0))] + _cumulative_polygon(list(W)[: kmax + 1], D)


def lfunction_degree(P: Polytope) -> int:
    return normalized_volume(P)


@dataclass(frozen=True)
class HodgeData:
    D: int
    W: tuple[int, ...]
    H: tuple[int, ...]
    hp_vertices: tuple[tuple[int, Fraction], ...]
    break_points: tuple[tuple[int, Fraction], ...]
    chain_vertices: tuple[tuple[int, Fraction], ...]
    degree: int

    def slopes(self) -> list[Fraction]:
        """Slope multiset of the Hodge polygon."""
        return [Fraction(k, self.D) for k, h in enumerate(self.H) for _ in range(h)]


def hodge_data(P: Polytope, kmax: Optional[int] = None) -> HodgeData:
    D = denominator(P)
    top = P.n * D
    kmax = top if kmax is None else kmax
    W = weight_counts(P, max(top, kmax))
    H = hodge_numbers(P, W)
    verts, breaks = hodge_polygon(P, H)
    degree = lfunction_degree(P)
    if sum(H) != degree:
        raise HodgeConsistencyError(f"Hodge numbers sum to {sum(H)} but n!Vol = {degree}")
    return HodgeData(
        D=D,
        W=tuple(W),
        H=tuple(H),
        hp_vertices=tuple(verts),
        break_points=tuple(breaks),
        chain_vertices=tuple(chain_polygon(P, kmax, W)),
        degree=degree,
    )
