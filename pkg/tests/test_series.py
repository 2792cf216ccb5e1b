
import pytest
from hypothesis import given, settings, strategies as st

from brute import series_at
from motzeta.errors import Inconsistent, NonvanishingPolyPart, Underdetermined, UnsupportedShape
from motzeta.gring import L, LaurentPoly, LocalizedMotive, specialize
from motzeta.series import (RationalSeries, coefficient, fit_series, gen, hadamard,
                            limit_at_infinity, parse_series, render_series, series_combine)

G = RationalSeries.generator


def at(s, q, top):
    return [specialize(coefficient(s, m), q) if s.q is None else coefficient(s, m)
            for m in range(top + 1)]


def test_combine_cancels():
    assert series_combine(G(0, 1), G(0, 1).scale(-1), "add").is_zero()


def test_product_key():
    s = series_combine(G(-2, 1), G(-1, 1), "mul")
    assert s.rational == {(gen(-2, 1), gen(-1, 1)): 1} and not s.poly


def test_t_times_generator():
    s = RationalSeries({1: 1}) * G(0, 1)
    # T/(1 - T) * T has coefficient 1 at every m >= 2
    assert [coefficient(s, m) for m in range(10)] == [0, 0] + [1] * 8


def test_coefficient_examples():
    assert coefficient(G(-2, 1), 3) == LaurentPoly.monomial(-6)
    assert coefficient(G(-1, 2), 3) == 0
    assert coefficient(G(0, 1) * G(0, 1), 4) == 3


def test_limit_examples():
    assert limit_at_infinity(G(5, 3)) == -1
    d2 = 2
    combo = G(d2, 1) - G(0, 1)
    assert limit_at_infinity(combo) == 0
    assert limit_at_infinity(G(0, 1) * G(-1, 2)) == 1
    with pytest.raises(NonvanishingPolyPart):
        limit_at_infinity(RationalSeries({2: 1}))


def test_product_expansion_oracle():
    prod = G(0, 1) * G(-1, 1)
    assert at(prod, 3, 12) == series_at([(1, [(0, 1), (-1, 1)])], 3, 12)
    assert limit_at_infinity(prod) == 1


def test_hadamard_examples():
    assert hadamard(G(2, 1), G(-5, 1)) == G(-3, 1)
    h = hadamard(G(1, 2), G(1, 3))
    assert h == G(5, 6)
    assert all(coefficient(h, m) == coefficient(G(1, 2), m) * coefficient(G(1, 3), m)
               for m in range(13))
    with pytest.raises(UnsupportedShape):
        hadamard(G(0, 1) * G(0, 1), G(0, 1))


def test_fit_examples():
    k = 3
    data = [(m, coefficient(G(-1, k, k), m)) for m in range(1, 4 * k + 1)]
    assert fit_series(data, [gen(-1, k)]) == G(-1, k, k)
    annulus = [(1, L - 1), (2, L - L ** -1), (3, L - L ** -2)]
    assert fit_series(annulus, [gen(0, 1), gen(-1, 1)]) == G(0, 1, L) - G(-1, 1, L)
    assert fit_series([(1, 0), (2, 0)], [gen(0, 1)]).is_zero()


def test_fit_failures():
    with pytest.raises(Inconsistent):
        fit_series([(1, 1), (2, 5)], [gen(0, 1)])
    with pytest.raises(Underdetermined):
        fit_series([(1, 1)], [gen(0, 1), gen(-1, 1)], q=3)


def test_fit_numeric_with_product():
    data_spec = [(2, [(-1, 1)]), (12, [(-3, 2)]), (8, [(-1, 1), (-3, 2)])]
    values = series_at(data_spec, 3, 8)
    got = fit_series([(m, values[m]) for m in range(1, 9)],
                     [gen(-1, 1), gen(-3, 2), (gen(-1, 1), gen(-3, 2))], q=3)
    assert -limit_at_infinity(got) == 6


def test_render_parse_round_trip():
    s = RationalSeries({0: L, 2: -3}) + (G(0, 1) * G(-1, 2)).scale(-L - 1)
    text = render_series(s)
    assert parse_series(text) == s
    assert parse_series("lim(gen(0,1))") == -1
    assert parse_series("had(gen(1,2), gen(1,3))") == G(5, 6)


# -- properties

single = st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 4), st.integers(-4, 4)),
                  min_size=1, max_size=3)


def build(terms):
    out = RationalSeries()
    for e, i, c in terms:
        out = out + G(e, i, c)
    return out


@settings(max_examples=40, deadline=None)
@given(single, single)
def test_product_is_convolution(a, b):
    sa, sb = build(a), build(b)
    prod = series_combine(sa, sb, "mul")
    for m in range(0, 13):
        conv = sum((coefficient(sa, j) * coefficient(sb, m - j) for j in range(m + 1)),
                   LocalizedMotive(0))
        assert coefficient(prod, m) == conv


@settings(max_examples=40, deadline=None)
@given(single, single, st.integers(-2, 2), st.integers(-2, 2))
def test_limit_is_linear(a, b, x, y):
    sa, sb = build(a), build(b)
    al, be = LaurentPoly({x: 1}), LaurentPoly({0: y, 1: 1})
    assert limit_at_infinity(sa.scale(al) + sb.scale(be)) == (
        al * limit_at_infinity(sa) + be * limit_at_infinity(sb))


@settings(max_examples=40, deadline=None)
@given(single, single)
def test_hadamard_coefficients_and_limit(a, b):
    sa, sb = build(a), build(b)
    h = hadamard(sa, sb)
    for m in range(0, 31):
        assert coefficient(h, m) == coefficient(sa, m) * coefficient(sb, m)
    assert limit_at_infinity(h) == -limit_at_infinity(sa) * limit_at_infinity(sb)


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(1, 3), st.integers(1, 3))
def test_equal_period_products_split(e1, gap, i):
    # x y / ((1-x)(1-y)) = (L^e1 gen(e2,i) - L^e2 gen(e1,i)) / (L^e2 - L^e1)
    e2 = e1 + gap
    prod = G(e1, i) * G(e2, i)
    c = LocalizedMotive(LaurentPoly.monomial(e2) - LaurentPoly.monomial(e1)).inverse()
    split = (G(e2, i, LaurentPoly.monomial(e1)) - G(e1, i, LaurentPoly.monomial(e2))).scale(c)
    for m in range(31):
        assert coefficient(prod, m) == coefficient(split, m)
    assert limit_at_infinity(prod) == limit_at_infinity(split) == 1
    assert at(prod, 2, 30) == series_at([(1, [(e1, i), (e2, i)])], 2, 30)
