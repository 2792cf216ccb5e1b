from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from brute import lattice_sum
from motzeta.errors import DimensionTooLarge, OverlappingPieces, ParseError, Unbounded
from motzeta.gamma import (ConePiece, GradedPolyhedron, Polyhedron, a_m_sum, constraint,
                           euler_char, graded_a_m_sum, integrate_dchi, interval,
                           lattice_points, parse_constraint, point, polyhedron, product)
from motzeta.gring import L, LaurentPoly, LocalizedMotive, specialize

F = Fraction


def triangle():
    return polyhedron(2, [((1, 0), ">=", 0), ((0, 1), ">=", 0), ((-1, -1), ">=", -1)])


def test_lattice_points_examples():
    assert sorted(lattice_points(interval(0, 1), 2)) == [(0,), (F(1, 2),), (1,)]
    assert lattice_points(interval(0, 1, True, True), 1) == []
    assert len(lattice_points(triangle(), 2)) == 6


def test_unbounded_lattice_points():
    with pytest.raises(Unbounded):
        lattice_points(interval(0, None), 1)


def test_a_m_examples():
    assert a_m_sum(interval(0, 1), 1) == (L - 1) * (1 + L ** -1)
    for m in (1, 2, 3):
        for i in range(7):
            assert a_m_sum(point([F(i, m)]), m) == LocalizedMotive(LaurentPoly.monomial(-i) * (L - 1))
    assert a_m_sum(interval(0, None), 1) == LocalizedMotive(L)


def test_ray_matches_partial_sums():
    closed = specialize(a_m_sum(interval(0, None), 1), 3)
    for n in range(1, 21):
        partial = specialize(a_m_sum(interval(0, n), 1), 3)
        # remaining tail is (q - 1) * sum_{k > n} q^-k = q^-n
        assert closed - partial == F(1, 3 ** n)


def test_cone_sum_matches_box():
    cone = ConePiece((0, 0), ((1, 0), (0, 1)))
    box = polyhedron(2, [((1, 0), ">=", 0), ((0, 1), ">=", 0)])
    assert a_m_sum(cone, 2) == a_m_sum(box, 2)


def test_graded_examples():
    base = interval(0, 1)
    assert graded_a_m_sum(GradedPolyhedron(base, (0,)), 2) == a_m_sum(base, 2)
    assert graded_a_m_sum(GradedPolyhedron(point([0]), (0,), F(1, 2)), 1) == 0
    got = graded_a_m_sum(GradedPolyhedron(base, (1,)), 1)
    assert got == (L - 1) * (1 + L ** -2)


def test_euler_truth_table():
    assert euler_char(point([0])) == 1
    assert euler_char(interval(0, 1, True, True)) == -1
    assert euler_char(interval(0, 1)) == 1
    assert euler_char(interval(0, 1, False, True)) == 0
    assert euler_char(interval(0, None, True)) == -1
    assert euler_char(interval(0, None)) == 0
    ray = interval(0, None, True)
    assert euler_char(product(ray, ray)) == 1
    with pytest.raises(DimensionTooLarge):
        euler_char(Polyhedron(4, ()))


def test_integrate_dchi_examples():
    c1, c2, c3 = LocalizedMotive(L), LocalizedMotive(L ** 2), LocalizedMotive(3)
    assert integrate_dchi([(interval(0, None, True), c1)]) == -c1
    pieces = [(point([0]), c1), (interval(0, 1, True, True), c2), (point([1]), c3)]
    assert integrate_dchi(pieces) == c1 - c2 + c3
    assert integrate_dchi([(p, 0) for p, _ in pieces]) == 0
    with pytest.raises(OverlappingPieces):
        integrate_dchi([(interval(0, 1), 1), (point([1]), 1)])


def test_parse_constraint():
    c = parse_constraint("1, -1/2 <= 3", 2)
    assert c == constraint((1, F(-1, 2)), "<=", 3)
    with pytest.raises(ParseError):
        parse_constraint("1 >= 3/0", 1)
    with pytest.raises(ParseError):
        parse_constraint("1, 2 >= 0", 1)


# -- properties

rows2 = st.lists(st.tuples(st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
                           st.sampled_from([">=", ">", "=", "<=", "<"]),
                           st.integers(-2, 2)), max_size=3)


def boxed(rows, dim=2):
    # intersect with a box so enumeration oracles terminate
    box = [(tuple(int(i == j) for i in range(dim)), ">=", -2) for j in range(dim)]
    box += [(tuple(-int(i == j) for i in range(dim)), ">=", -2) for j in range(dim)]
    return polyhedron(dim, list(rows) + box)


@settings(max_examples=40, deadline=None)
@given(rows2, st.integers(1, 2), st.sampled_from([2, 3, 5]))
def test_a_m_specializes_to_enumeration(rows, m, q):
    p = boxed(rows)
    want = lattice_sum(p.contains, [(-2, 2), (-2, 2)], m, q)
    assert specialize(a_m_sum(p, m), q) == want


@settings(max_examples=40, deadline=None)
@given(rows2, st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-2, 2))
def test_euler_additive(rows, a, b):
    p = polyhedron(2, rows)
    parts = [p.intersect(Polyhedron(2, (constraint(a, rel, b),))) for rel in (">", "=", "<")]
    assert euler_char(p) == sum(euler_char(x) for x in parts)


@settings(max_examples=40, deadline=None)
@given(rows2, st.integers(-2, 2), st.integers(-2, 2), st.booleans(), st.booleans())
def test_euler_multiplicative(rows, lo, width, lo_open, hi_open):
    p = polyhedron(2, rows)
    r = interval(lo, lo + abs(width), lo_open, hi_open)
    assert euler_char(product(p, r)) == euler_char(p) * euler_char(r)
