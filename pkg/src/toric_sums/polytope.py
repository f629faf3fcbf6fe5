"""Newton polyhedra: vertices, facets, face lattice, denominator and volume.

The polyhedron of a Laurent polynomial is the convex hull of the origin and
its exponent vectors.  Facets are found by exhaustive search over affinely
independent vertex subsets, which is exact and fast for the small polytopes
this package targets (at most 20 vertices, dimension at most 8).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .exact import (
    LpProblem,
    affine_rank,
    det_exact,
    lcm_of_denominators,
    lp_solve,
    nullspace,
    primitive_integer_vector,
    smith_normal_form,
    solve,
)
from .laurent import LaurentPolySpec

MAX_VERTICES = 20
MAX_DIM = 8

Point = tuple[int, ...]


class DegeneratePolytopeError(ValueError):
    """The polytope is not full dimensional."""

    def __init__(self, dim: int, n: int):
        super().__init__(f"Newton polyhedron has dimension {dim}, expected {n}")
        self.dim = dim
        self.n = n


@dataclass(frozen=True)
class FacetForm:
    """Off-origin facet ``sum(e_i x_i) == 1``, all of Delta on the ``<= 1`` side."""

    coeffs: tuple[Fraction, ...]
    vertex_ids: frozenset[int]

    def __call__(self, u: Sequence[int]) -> Fraction:
        return sum((e * x for e, x in zip(self.coeffs, u)), Fraction(0))

    @property
    def denominator(self) -> int:
        return lcm_of_denominators(self.coeffs)


@dataclass(frozen=True)
class HomogeneousFacet:
    """Facet through the origin, ``sum(a_i x_i) <= 0`` on Delta, primitive integer normal."""

    coeffs: tuple[int, ...]
    vertex_ids: frozenset[int]

    def __call__(self, u: Sequence[int]) -> int:
        return sum(a * x for a, x in zip(self.coeffs, u))


@dataclass(frozen=True)
class Face:
    vertex_ids: frozenset[int]
    dim: int
    contains_origin: bool


class FaceLattice:
    """All nonempty faces, ordered by dimension, with containment queries."""

    def __init__(self, faces: Sequence[Face], n: int):
        self.faces = tuple(sorted(faces, key=lambda f: (f.dim, sorted(f.vertex_ids))))
        self.n = n
        self._by_ids = {f.vertex_ids: f for f in self.faces}

    def __iter__(self):
        return iter(self.faces)

    def __len__(self):
        return len(self.faces)

    def of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]

    def lookup(self, vertex_ids: Iterable[int]) -> Face | None:
        return self._by_ids.get(frozenset(vertex_ids))

    def containing(self, face: Face) -> list[Face]:
        return [f for f in self.faces if face.vertex_ids <= f.vertex_ids]

    def subfaces(self, face: Face, dim: int) -> list[Face]:
        return [f for f in self.faces if f.dim == dim and f.vertex_ids <= face.vertex_ids]

    def top(self) -> Face:
        return self.faces[-1]


class Polytope:
    """Newton polyhedron conv({0} U exponents) with lazily derived combinatorics."""

    def __init__(self, n: int, points: Sequence[Point]):
        self.n = n
        origin = (0,) * n
        pts = [origin] + [tuple(p) for p in points if tuple(p) != origin]
        pts = list(dict.fromkeys(pts))
        self.dim = affine_rank(pts)
        keep = [p for i, p in enumerate(pts) if not _in_hull(p, pts[:i] + pts[i + 1:])]
        self.origin_is_vertex = origin in keep
        # origin first when it is a vertex, the rest in input order
        self.vertices: tuple[Point, ...] = tuple(keep)
        if len(self.vertices) > MAX_VERTICES or n > MAX_DIM:
            raise ValueError(
                f"facet search is limited to {MAX_VERTICES} vertices in dimension <= {MAX_DIM}; "
                f"got {len(self.vertices)} vertices in dimension {n}"
            )

    def __repr__(self) -> str:
        return f"Polytope(n={self.n}, vertices={list(self.vertices)})"

    @property
    def origin_id(self) -> int | None:
        return 0 if self.origin_is_vertex else None

    @property
    def nonzero_vertices(self) -> list[Point]:
        return [v for v in self.vertices if any(v)]

    def require_full_dimension(self) -> None:
        if self.dim != self.n:
            raise DegeneratePolytopeError(self.dim, self.n)

    @cached_property
    def facets(self) -> tuple[tuple[FacetForm, ...], tuple[HomogeneousFacet, ...]]:
        self.require_full_dimension()
        return _search_facets(self)

    @property
    def facets_off_origin(self) -> tuple[FacetForm, ...]:
        return self.facets[0]

    @property
    def facets_through_origin(self) -> tuple[HomogeneousFacet, ...]:
        return self.facets[1]

    @cached_property
    def lattice(self) -> FaceLattice:
        return _build_lattice(self)

    def points_of(self, ids: Iterable[int]) -> list[Point]:
        return [self.vertices[i] for i in sorted(ids)]


def _in_hull(p: Point, others: Sequence[Point]) -> bool:
    if not others:
        return False
    A = [[q[i] for q in others] for i in range(len(p))] + [[1] * len(others)]
    b = list(p) + [1]
    return lp_solve(LpProblem.of(A, b, [0] * len(others))).optimal


def build_polytope(f: Union[LaurentPolySpec, Sequence[Point]], n: int | None = None) -> Polytope:
    """Newton polyhedron of a Laurent polynomial (or of a bare point list)."""
    if isinstance(f, LaurentPolySpec):
        return Polytope(f.n, f.exponents)
    pts = [tuple(int(x) for x in p) for p in f]
    if n is None:
        if not pts:
            raise ValueError("dimension needed for an empty point list")
        n = len(pts[0])
    return Polytope(n, pts)


def origin_is_vertex(P: Polytope) -> bool:
    return P.origin_is_vertex


def _search_facets(P: Polytope):
    n = P.n
    verts = P.vertices
    nonzero = [i for i, v in enumerate(verts) if any(v)]

    off: dict[tuple[Fraction, ...], FacetForm] = {}
    for combo in itertools.combinations(nonzero, n):
        M = [list(verts[i]) for i in combo]
        if det_exact(M) == 0:
            continue
        e = tuple(solve(M, [1] * n))
        if e in off:
            continue
        vals = [sum((a * x for a, x in zip(e, v)), Fraction(0)) for v in verts]
        if all(val <= 1 for val in vals):
            ids = frozenset(i for i, val in enumerate(vals) if val == 1)
            off[e] = FacetForm(e, ids)

    through: dict[tuple[int, ...], HomogeneousFacet] = {}
    for combo in itertools.combinations(nonzero, n - 1):
        rows = [list(verts[i]) for i in combo]
        kernel = nullspace(rows, n)
        if len(kernel) != 1:
            continue
        a = primitive_integer_vector(kernel[0])
        vals = [sum(x * y for x, y in zip(a, v)) for v in verts]
        if all(val >= 0 for val in vals):
            a = tuple(-x for x in a)
            vals = [-val for val in vals]
        elif not all(val <= 0 for val in vals):
            continue
        if a in through:
            continue
        through[a] = HomogeneousFacet(a, frozenset(i for i, val in enumerate(vals) if val == 0))

    key = lambda f: sorted(f.vertex_ids)
    return tuple(sorted(off.values(), key=key)), tuple(sorted(through.values(), key=key))


def enumerate_facets(P: Polytope) -> tuple[tuple[FacetForm, ...], tuple[HomogeneousFacet, ...]]:
    """Off-origin facets as normalised forms and facets through the origin as homogeneous forms."""
    return P.facets


def _build_lattice(P: Polytope) -> FaceLattice:
    off, through = P.facets
    facet_sets = [f.vertex_ids for f in off] + [f.vertex_ids for f in through]
    through_sets = {f.vertex_ids for f in through}
    all_ids = frozenset(range(len(P.vertices)))

    found = set(facet_sets)
    frontier = list(found)
    while frontier:
        nxt = []
        for face in frontier:
            for fs in facet_sets:
                inter = face & fs
                if inter and inter not in found:
                    found.add(inter)
                    nxt.append(inter)
        frontier = nxt

    faces = []
    for ids in found:
        if P.origin_is_vertex:
            has0 = 0 in ids
        else:
            # a proper face holds the origin iff every facet containing it passes through 0
            has0 = all(fs in through_sets for fs in facet_sets if ids <= fs)
        faces.append(Face(ids, affine_rank(P.points_of(ids)), has0))
    faces.append(Face(all_ids, P.n, True))
    return FaceLattice(faces, P.n)


def face_lattice(P: Polytope) -> FaceLattice:
    return P.lattice


def faces_containing_origin_counts(P: Polytope) -> list[int]:
    """Number of k-dimensional faces through the origin, k = 0..n-1."""
    counts = [0] * P.n
    for face in P.lattice:
        if face.contains_origin and face.dim < P.n:
            counts[face.dim] += 1
    return counts


def denominator(P: Polytope) -> int:
    return math.lcm(*(f.denominator for f in P.facets_off_origin))


def triangulate(P: Polytope, face: Face) -> list[tuple[int, ...]]:
    """Pulling triangulation of ``face`` anchored at its lexicographically smallest vertex."""
    ids = sorted(face.vertex_ids)
    if len(ids) == face.dim + 1:
        return [tuple(ids)]
    anchor = min(ids, key=lambda i: P.vertices[i])
    out = []
    for sub in P.lattice.subfaces(face, face.dim - 1):
        if anchor in sub.vertex_ids:
            continue
        for simplex in triangulate(P, sub):
            out.append(tuple(sorted((anchor,) + simplex)))
    return out


def normalized_volume(P: Polytope) -> int:
    """n! Vol(Delta), summed over the pyramids on the off-origin facets."""
    P.require_full_dimension()
    total = 0
    for facet in P.facets_off_origin:
        face = P.lattice.lookup(facet.vertex_ids)
        for simplex in triangulate(P, face):
            total += abs(det_exact([list(P.vertices[i]) for i in simplex]))
    return total


def lattice_normalized_volume(P: Polytope, face: Face) -> int:
    """(dim face)! times the volume of ``face`` measured in the lattice of its affine span."""
    total = 0
    for simplex in triangulate(P, face):
        base = P.vertices[simplex[0]]
        gens = [[P.vertices[i][r] - base[r] for i in simplex[1:]] for r in range(P.n)]
        if not simplex[1:]:
            total += 1
            continue
        total += math.prod(smith_normal_form(gens).nonzero)
    return total
