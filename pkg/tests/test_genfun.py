from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kummer_census.abgroup import GroupSpec
from kummer_census.census import CensusConstraint, count_F_D
from kummer_census.errors import ConfigError
from kummer_census.ffield import make_field
from kummer_census.genfun import (CycloNum, TwistSpec, coefficient, cyclotomic_poly, euler_product_A,
                                  euler_product_literal, indicator, pole_orders, predicted_growth,
                                  series_F)

F3, F5, F7 = make_field(3), make_field(5), make_field(7)
Z2, Z3, Z4, V4 = GroupSpec((2,)), GroupSpec((3,)), GroupSpec((4,)), GroupSpec((2, 2))


def test_cyclotomic():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("r", [2, 3, 4, 6, 8])
def test_roots_of_unity(r):
    xi = CycloNum.root(r, 1)
    acc = CycloNum.rational(r, 1)
    for _ in range(r):
        acc = acc * xi
    assert acc == 1
    assert sum((CycloNum.root(r, k) for k in range(r)), CycloNum.rational(r, 0)) == 0


cyclo = st.builds(lambda cs: CycloNum(6, [Fraction(c) for c in cs]),
                  st.lists(st.integers(-5, 5), min_size=6, max_size=6))


@settings(max_examples=60, deadline=None)
@given(a=cyclo, b=cyclo, c=cyclo)
def test_field_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


def test_series_examples():
    s = series_F(Z2, F3, CensusConstraint((0,)), dmax=8)
    assert coefficient(s, 4) == 54
    assert coefficient(s, 3) == 0
    assert coefficient(s, 0) == 1
    with pytest.raises(IndexError):
        coefficient(s, 9)
    for G, ctx in ((V4, F5), (Z3, F7), (Z4, F5)):
        assert coefficient(series_F(G, ctx, CensusConstraint(G.zero()), dmax=2), 0) == 1


def test_growth_examples():
    assert predicted_growth(Z2) == [(Fraction(1), 0)]
    assert predicted_growth(V4) == [(Fraction(1, 2), 2)]
    assert predicted_growth(Z4) == [(Fraction(1, 2), 0), (Fraction(1, 3), 1)]


def test_indicator():
    for d in Z4.elements():
        for k in Z4.elements():
            assert indicator(Z4, d, k) == (1 if d == k else 0)


@pytest.mark.parametrize("G,ctx", [(Z2, F3), (V4, F5), (Z3, F7), (Z4, F5)])
def test_literal_product(G, ctx):
    cc = CensusConstraint(None, (1,), (G.zero(),))
    for t in G.elements()[:3]:
        for row in G.elements()[:2]:
            ts = TwistSpec(t, (row,))
            a = euler_product_A(G, ctx, cc, ts, dmax=6)
            b = euler_product_literal(G, ctx, cc, ts, dmax=6)
            assert a.coeffs == b.coeffs


@settings(max_examples=25, deadline=None)
@given(case=st.sampled_from([(Z2, F3, 8), (V4, F5, 8), (Z3, F7, 8), (Z4, F5, 7)]),
       data=st.data())
def test_series_matches_enumeration(case, data):
    G, ctx, dmax = case
    k = data.draw(st.one_of(st.none(), st.sampled_from(G.elements())))
    ell = data.draw(st.integers(0, 1))
    pts = (data.draw(st.integers(0, ctx.q - 1)),) if ell else ()
    E = tuple(data.draw(st.sampled_from(G.elements())) for _ in pts)
    cc = CensusConstraint(k, pts, E)
    s = series_F(G, ctx, cc, dmax=dmax)
    D = data.draw(st.integers(0, dmax))
    assert coefficient(s, D) == count_F_D(G, ctx, D, cc)


def test_weights_override():
    w = (1, 1, 1)
    s = series_F(V4, F5, None, weights=w, dmax=4)
    assert [int(coefficient(s, D)) for D in range(5)] == [count_F_D(V4, F5, D, weights=w) for D in range(5)]


def test_pole_orders_partition():
    for G in (Z2, V4, Z3, Z4):
        for t in G.elements():
            m = pole_orders(G, TwistSpec(t))
            assert sum(m.values()) == len(G.nonzero())
    assert pole_orders(V4, TwistSpec((0, 0)))[(0, 1)] == 3


def test_bad_inputs():
    with pytest.raises(ConfigError):
        series_F(Z2, F3, dmax=0)
    with pytest.raises(ConfigError):
        series_F(Z3, F5, dmax=4)
