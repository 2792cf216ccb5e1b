from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from motzeta.arcs import ArcTask, count_arcs, parse_polynomial
from motzeta.gring import L, LaurentPoly, LocalizedMotive, specialize
from motzeta.nearby import (Component, DomainFactor, ResolutionDatum, annulus_series,
                            motivic_volume, nearby_cycles, standard_volume, volume_series)
from motzeta.series import RationalSeries, coefficient, limit_at_infinity


def mono(e):
    return LocalizedMotive(LaurentPoly.monomial(e))


def xk(k):
    return ResolutionDatum((Component(k, 1),), {(1,): k}, 1)


def xy():
    return ResolutionDatum((Component(1, 1), Component(1, 1)), {(1, 2): 1}, 2)


def normalized_count(text, m, q, d):
    f = parse_polynomial(text)
    return Fraction(count_arcs(ArcTask(f, m, m + 1, q, ("positive",) * d)), q ** ((m + 1) * d))


def test_nearby_examples():
    c = LocalizedMotive(L ** 2 + 3)
    assert nearby_cycles(ResolutionDatum((Component(1, 1),), {(1,): c}, 2)) == c
    assert nearby_cycles(xk(3)) == 3
    s = nearby_cycles(xy())
    assert s == 1 - L
    assert specialize(s, 1) == 0


def test_volume_series_examples():
    for k in (2, 3):
        ser = volume_series(xk(k))
        assert ser == RationalSeries.generator(-1, k, mono(-1) * k)
        for j in (1, 2, 3):
            assert coefficient(ser, k * j) == mono(-1 - j) * k
    assert volume_series(ResolutionDatum((Component(2, 1),), {}, 1)).is_zero()
    two = ResolutionDatum((Component(1, 1), Component(1, 2)), {(1,): 1, (2,): 1}, 1)
    assert volume_series(two) == (RationalSeries.generator(-1, 1, mono(-1))
                                  + RationalSeries.generator(-2, 1, mono(-1)))


def test_xk_against_arc_counts():
    for k, q in ((2, 5), (2, 7), (3, 7)):
        ser = volume_series(xk(k))
        for m in range(1, 7):
            assert specialize(coefficient(ser, m), q) == normalized_count(f"x^{k}", m, q, 1)


def test_xy_against_arc_counts():
    ser = volume_series(xy())
    for q in (3, 5):
        for m in range(1, 5):
            assert specialize(coefficient(ser, m), q) == normalized_count("x*y", m, q, 2)


def test_motivic_volume_examples():
    assert motivic_volume(xk(4)) == mono(-1) * 4
    c = LocalizedMotive(L + 1)
    assert motivic_volume(ResolutionDatum((Component(1, 1),), {(1,): c}, 3)) == mono(-3) * c
    assert motivic_volume(xy()) == mono(-2) * (1 - L)


def test_standard_volume_examples():
    assert standard_volume([DomainFactor("open_polydisc", 2)])[0] == mono(-2)
    value, warnings = standard_volume([DomainFactor("punctured_closed_polydisc", 1)])
    assert value == 0 and not warnings
    assert standard_volume([DomainFactor("annulus", ratio=Fraction(3, 2))])[0] == 0
    _, warnings = standard_volume([DomainFactor("point"), DomainFactor("punctured_closed_polydisc", 2)])
    assert warnings


def test_standard_volume_multiplicative():
    a = [DomainFactor("open_polydisc", 1), DomainFactor("closed_polydisc", 2)]
    b = [DomainFactor("open_polydisc", 3)]
    assert standard_volume(a + b)[0] == standard_volume(a)[0] * standard_volume(b)[0]


def test_annulus_limits():
    for p, q in ((1, 1), (1, 2), (3, 2), (5, 1)):
        assert limit_at_infinity(annulus_series(p, q)) == 0


def test_tag_validation():
    with pytest.raises(ValueError):
        ResolutionDatum((Component(2, 1), Component(4, 1)), {(1, 2): 1}, 2, {frozenset({1, 2}): 4})
    ResolutionDatum((Component(2, 1), Component(4, 1)), {(1, 2): 1}, 2, {frozenset({1, 2}): 2})


# -- properties

comps = st.lists(st.builds(Component, st.integers(1, 4), st.integers(1, 3)), min_size=1, max_size=3)


@st.composite
def resolutions(draw):
    cs = draw(comps)
    n = len(cs)
    strata = {}
    for mask in range(1, 2 ** n):
        if draw(st.booleans()):
            key = frozenset(i + 1 for i in range(n) if mask >> i & 1)
            strata[key] = LaurentPoly({draw(st.integers(0, 2)): draw(st.integers(0, 5))})
    return ResolutionDatum(tuple(cs), strata, draw(st.integers(1, 3)))


@settings(max_examples=60, deadline=None)
@given(resolutions())
def test_limit_consistency(res):
    assert motivic_volume(res) == mono(-res.reldim) * nearby_cycles(res)


@settings(max_examples=40, deadline=None)
@given(resolutions())
def test_coefficients_nonnegative(res):
    ser = volume_series(res)
    assert all(specialize(coefficient(ser, m), 5) >= 0 for m in range(1, 13))
