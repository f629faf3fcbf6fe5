from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from toric_sums.exact import det_exact
from toric_sums.laurent import LaurentPolySpec, g_polynomial
from toric_sums.ordinary import (
    INCONCLUSIVE,
    NOT_NON_DEGENERATE,
    ORDINARY,
    NotOrdinaryError,
    UnsupportedError,
    facet_reports,
    global_ordinariness,
    predicted_slopes,
    trivial_unit_root_descriptor,
)
from toric_sums.polytope import build_polytope, normalized_volume


def mono(n, *exps, const=None):
    terms = [(1, e) for e in exps]
    if const is not None:
        terms.append((const, (0,) * n))
    return LaurentPolySpec.from_terms(n, terms)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 101])
def test_g_is_ordinary(p):
    v = global_ordinariness(g_polynomial([1] * 6), p)
    assert v.status == ORDINARY
    assert len(v.facets) == 9
    assert all(rep.det_abs == 1 for rep, _ in v.facets)


def test_g_facet_determinants():
    assert [r.det_abs for r in facet_reports(g_polynomial([1] * 6))] == [1] * 9


def test_one_variable_monomials():
    x2, x3 = mono(1, (2,)), mono(1, (3,))
    assert global_ordinariness(x2, 2).status == NOT_NON_DEGENERATE
    assert global_ordinariness(x2, 3).status == ORDINARY
    assert global_ordinariness(x3, 2).status == INCONCLUSIVE
    assert global_ordinariness(x3, 5).status == INCONCLUSIVE
    assert global_ordinariness(x3, 7).status == ORDINARY
    assert global_ordinariness(x3, 3).status == NOT_NON_DEGENERATE


def test_non_diagonal_facet_is_unsupported():
    f = mono(2, (2, 0), (0, 2), (1, 1))
    with pytest.raises(UnsupportedError):
        global_ordinariness(f, 3)


def test_g_predicted_slopes():
    f = g_polynomial([1] * 6)
    star = predicted_slopes(f, 3)
    assert star.degree == 9
    assert star.multiset() == [0, 1, 1, 2, 2, 2, 3, 3, 4]
    L = predicted_slopes(f, 3, shift=-1, drop_unit_root=True)
    assert L.slopes == ((0, 2), (1, 3), (2, 2), (3, 1))
    assert L.degree == 8


def test_slopes_need_ordinary():
    with pytest.raises(NotOrdinaryError):
        predicted_slopes(mono(1, (3,)), 2)


def test_rational_slopes():
    s = predicted_slopes(mono(1, (3,)), 7)
    assert s.multiset() == [0, Fraction(1, 3), Fraction(2, 3)]


def test_trivial_unit_root():
    assert trivial_unit_root_descriptor(mono(1, (1,), const=1), 2).t == 1
    assert trivial_unit_root_descriptor(mono(1, (1,)), 2).t == 0
    assert trivial_unit_root_descriptor(mono(1, (1,), (-1,)), 3) is None
    assert trivial_unit_root_descriptor(g_polynomial([1] * 6), 3).describe() == "1 - T"


@st.composite
def diagonal_simplices(draw):
    n = draw(st.integers(1, 3))
    col = st.tuples(*[st.integers(-3, 3)] * n)
    cols = draw(st.lists(col, min_size=n, max_size=n))
    M = [[c[i] for c in cols] for i in range(n)]
    if det_exact(M) == 0:
        cols = [tuple((i + 1) * int(i == j) for j in range(n)) for i in range(n)]
    p = draw(st.sampled_from([2, 3, 5, 7, 11, 13]))
    return n, cols, p


@pytest.mark.property
@given(diagonal_simplices())
def test_diagonal_verdict_laws(sample):
    n, cols, p = sample
    f = mono(n, *cols)
    P = build_polytope(f)
    det = abs(det_exact([[c[i] for c in cols] for i in range(n)]))
    v = global_ordinariness(f, p, P)
    assert (v.status == NOT_NON_DEGENERATE) == (det % p == 0)
    for rep, fv in v.facets:
        prod = 1
        for d in rep.invariant_factors:
            prod *= d
        assert prod == rep.det_abs
        if fv.status == ORDINARY:
            assert p % rep.largest_factor == 1 or rep.largest_factor == 1
    if v.status == ORDINARY:
        s = predicted_slopes(f, p, P=P)
        assert s.degree == normalized_volume(P)
        assert all(0 <= x <= n for x in s.multiset())


@pytest.mark.property
@given(st.integers(1, 12), st.sampled_from([p for p in sympy.primerange(2, 60)]))
def test_one_variable_rule(d, p):
    v = global_ordinariness(mono(1, (d,)), p)
    if d % p == 0:
        assert v.status == NOT_NON_DEGENERATE
    elif d == 1 or p % d == 1:
        assert v.status == ORDINARY
    else:
        assert v.status == INCONCLUSIVE
