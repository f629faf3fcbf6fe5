from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import full_dim_point_sets
from toric_sums.exact import det_exact, matmul
from toric_sums.laurent import LaurentPolySpec, G_EXPONENTS, g_polynomial
from toric_sums.polytope import (
    DegeneratePolytopeError,
    build_polytope,
    denominator,
    faces_containing_origin_counts,
    lattice_normalized_volume,
    normalized_volume,
)

V = dict(zip(["V1", "V2", "V3", "V4", "V5", "V6", "V7"], G_EXPONENTS))


@pytest.fixture(scope="module")
def G():
    return build_polytope(g_polynomial())


def test_g_vertices(G):
    assert G.origin_is_vertex
    assert len(G.vertices) == 8
    assert set(G.nonzero_vertices) == set(G_EXPONENTS)


def test_g_facet_equations(G):
    # sign patterns on (x2, x3, x4) coefficients paired with each vertex set
    expected = {
        (1, 1, 1, 1, 1): {"V1", "V2", "V3", "V4", "V5"},
        (1, 1, 1, -1, 1): {"V1", "V2", "V3", "V5", "V7"},
        (1, 1, -1, 1, 1): {"V1", "V2", "V4", "V5", "V7"},
        (1, -1, 1, 1, 1): {"V1", "V3", "V4", "V5", "V6"},
        (1, -1, 1, -1, 1): {"V1", "V3", "V5", "V6", "V7"},
        (1, -1, -1, 1, 1): {"V1", "V4", "V5", "V6", "V7"},
        (-1, 1, 1, 1, 1): {"V2", "V3", "V4", "V5", "V6"},
        (-1, 1, 1, -1, 1): {"V2", "V3", "V5", "V6", "V7"},
        (-1, 1, -1, 1, 1): {"V2", "V4", "V5", "V6", "V7"},
    }
    got = {tuple(int(e) for e in h.coeffs): set(G.points_of(h.vertex_ids)) for h in G.facets_off_origin}
    assert got == {k: {V[x] for x in v} for k, v in expected.items()}


def test_g_invariants(G):
    assert denominator(G) == 1
    assert normalized_volume(G) == 9
    assert faces_containing_origin_counts(G) == [1, 6, 15, 18, 9]
    assert len(G.facets_through_origin) == 9


def test_g_runtime():
    t = time.perf_counter()
    P = build_polytope(g_polynomial())
    P.facets
    P.lattice
    assert time.perf_counter() - t < 1.0


def test_origin_faces_have_unit_volume(G):
    # every face through the origin of this polytope is a unimodular simplex
    for face in G.lattice:
        if face.contains_origin and face.dim < G.n:
            assert lattice_normalized_volume(G, face) == 1


def test_laurent_control():
    P = build_polytope(LaurentPolySpec.from_terms(1, [(1, (1,)), (1, (-1,))]))
    assert not P.origin_is_vertex
    assert set(P.vertices) == {(1,), (-1,)}
    assert normalized_volume(P) == 2
    assert denominator(P) == 1


def test_kloosterman_triangle():
    P = build_polytope([(1, 0), (0, 1), (-1, -1)], 2)
    assert not P.origin_is_vertex
    assert normalized_volume(P) == 3
    assert {tuple(h.coeffs) for h in P.facets_off_origin} == {(1, 1), (1, -2), (-2, 1)}


def test_rational_denominator():
    # x^2 + y^3: the facet through (2,0) and (0,3) is x/2 + y/3 = 1
    P = build_polytope([(2, 0), (0, 3)], 2)
    assert denominator(P) == 6
    assert normalized_volume(P) == 6


def test_standard_simplex():
    for n in range(1, 5):
        pts = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        P = build_polytope(pts, n)
        assert normalized_volume(P) == 1 and denominator(P) == 1


def test_degenerate_rejected():
    P = build_polytope([(1, 1), (2, 2)], 2)
    with pytest.raises(DegeneratePolytopeError):
        P.facets


@pytest.mark.property
@given(full_dim_point_sets())
def test_facets_support_every_vertex(sample):
    n, pts = sample
    P = build_polytope(pts, n)
    for h in P.facets_off_origin:
        assert all(h(v) <= 1 for v in P.vertices)
        on = [v for v in P.vertices if h(v) == 1]
        assert set(on) == set(P.points_of(h.vertex_ids))
        assert len(on) >= n
    for h in P.facets_through_origin:
        assert all(h(v) <= 0 for v in P.vertices)
    # the top face is Delta itself
    assert P.lattice.top().dim == n


@pytest.mark.property
@given(full_dim_point_sets(max_n=3))
def test_volume_matches_floating_hull(sample):
    spatial = pytest.importorskip("scipy.spatial")
    n, pts = sample
    P = build_polytope(pts, n)
    cloud = np.array([(0,) * n] + list(pts), dtype=float)
    if n == 1:
        vol = cloud.max() - cloud.min()
    else:
        vol = spatial.ConvexHull(cloud).volume
    assert normalized_volume(P) == round(vol * math.factorial(n))


@st.composite
def unimodular(draw, n):
    """Product of random elementary integer matrices."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 4))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i != j:
            E = [[int(a == b) for b in range(n)] for a in range(n)]
            E[i][j] = draw(st.integers(-2, 2))
            M = matmul(E, M)
    return M


@pytest.mark.property
@given(full_dim_point_sets(max_n=3).flatmap(lambda s: st.tuples(st.just(s), unimodular(s[0]))))
def test_invariants_under_unimodular_change(arg):
    (n, pts), U = arg
    assert abs(det_exact(U)) == 1
    moved = [tuple(sum(U[i][j] * p[j] for j in range(n)) for i in range(n)) for p in pts]
    P, Q = build_polytope(pts, n), build_polytope(moved, n)
    assert normalized_volume(P) == normalized_volume(Q)
    assert denominator(P) == denominator(Q)
    assert len(P.facets_off_origin) == len(Q.facets_off_origin)
    assert faces_containing_origin_counts(P) == faces_containing_origin_counts(Q)
