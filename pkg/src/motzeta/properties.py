"""Seeded randomized self-checks, runnable from a task file (kind = property).

Each check returns ``(passed, facts)`` where facts is a list of (label, value).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arcs import ArcTask, Target, count_arcs, parse_polynomial, xtilde
from .gamma import (a_m_sum, constraint, euler_char, interval, point, polyhedron,
                    product, Polyhedron)
from .gring import L, LaurentPoly, LocalizedMotive, specialize
from .nearby import (Component, ResolutionDatum, annulus_series, motivic_volume,
                     nearby_cycles, volume_series)
from .series import RationalSeries, coefficient, hadamard, limit_at_infinity


def random_laurent(rng, span=3, size=3, bound=4):
    return LaurentPoly({rng.randint(-span, span): rng.randint(-bound, bound)
                        for _ in range(rng.randint(1, size))})


def random_motive(rng):
    den = [rng.randint(1, 3) for _ in range(rng.randint(0, 2))]
    return LocalizedMotive(random_laurent(rng), den)


def random_single_combo(rng, terms=3):
    out = RationalSeries()
    for _ in range(rng.randint(1, terms)):
        out = out + RationalSeries.generator(rng.randint(-4, 3), rng.randint(1, 4),
                                             random_laurent(rng, 2, 2, 3))
    return out


def random_resolution(rng):
    n = rng.randint(1, 3)
    comps = tuple(Component(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(n))
    strata = {}
    for mask in range(1, 2 ** n):
        if rng.random() < 0.7:
            key = frozenset(i + 1 for i in range(n) if mask >> i & 1)
            strata[key] = random_motive(rng)
    return ResolutionDatum(comps, strata, rng.randint(1, 3))


def limit_axioms(rng, trials=20):
    ok = True
    for _ in range(trials):
        e, i = rng.randint(-10, 10), rng.randint(1, 6)
        ok &= limit_at_infinity(RationalSeries.generator(e, i)) == -1
    for _ in range(trials):
        a, b = random_single_combo(rng), random_single_combo(rng)
        a = a * RationalSeries.generator(rng.randint(-2, 2), rng.randint(1, 3))
        al, be = LocalizedMotive(random_laurent(rng)), random_motive(rng)
        lhs = limit_at_infinity(a.scale(al) + b.scale(be))
        ok &= lhs == al * limit_at_infinity(a) + be * limit_at_infinity(b)
    return ok, [("trials", trials)]


def annulus(rng=None, trials=None):
    ok = True
    facts = []
    for p, q in ((1, 1), (1, 2), (3, 2), (5, 1)):
        lim = limit_at_infinity(annulus_series(p, q))
        facts.append((f"limit p={p} q={q}", lim))
        ok &= lim == 0
    u = parse_polynomial("u")
    for m in (1, 2):
        task = ArcTask(u, m, 2 * m, 3, target=Target("ord_window", 0, m))
        got = xtilde(task, "enumerate")
        want = specialize(L - LaurentPoly.monomial(1 - m), 3)
        facts.append((f"xtilde m={m}", got))
        ok &= got == want
    return ok, facts


def hadamard_check(rng, trials=50, top=20):
    ok = True
    for _ in range(trials):
        a, b = random_single_combo(rng), random_single_combo(rng)
        h = hadamard(a, b)
        ok &= all(coefficient(h, m) == coefficient(a, m) * coefficient(b, m)
                  for m in range(top + 1))
        ok &= limit_at_infinity(h) == -limit_at_infinity(a) * limit_at_infinity(b)
    return ok, [("trials", trials)]


def limit_consistency(rng, trials=100):
    ok = True
    for _ in range(trials):
        res = random_resolution(rng)
        want = LocalizedMotive(LaurentPoly.monomial(-res.reldim)) * nearby_cycles(res)
        ok &= motivic_volume(res) == want
    return ok, [("trials", trials)]


def xk_cross(rng=None, trials=None, top=6):
    ok = True
    facts = []
    for k, q in ((2, 5), (2, 7), (3, 7)):
        res = ResolutionDatum((Component(k, 1),), {(1,): k}, 1)
        ser = volume_series(res)
        f = parse_polynomial(f"x^{k}")
        case = True
        for m in range(1, top + 1):
            want = specialize(coefficient(ser, m), q)
            count = count_arcs(ArcTask(f, m, m + 1, q, ("positive",)))
            case &= Fraction(count, q ** (m + 1)) == want
        facts.append((f"k={k} q={q}", case))
        ok &= case
    return ok, facts


def random_polyhedron(rng, dim):
    rows = []
    for _ in range(rng.randint(0, 3)):
        a = tuple(rng.randint(-2, 2) for _ in range(dim))
        rows.append(constraint(a, rng.choice((">=", ">", "=", "<=", "<")), rng.randint(-2, 2)))
    return Polyhedron(dim, tuple(rows))


def am_chi(rng, trials=40):
    ok = True
    for m in (1, 2, 3):
        for i in range(7):
            ok &= a_m_sum(point([Fraction(i, m)]), m) == LocalizedMotive(
                LaurentPoly.monomial(-i) * (L - 1))
    table = [(point([0]), 1), (interval(0, 1, True, True), -1), (interval(0, 1), 1),
             (interval(0, 1, False, True), 0), (interval(0, None, True), -1)]
    ok &= all(euler_char(p) == v for p, v in table)
    for _ in range(trials):
        n = rng.randint(1, 2)
        p = random_polyhedron(rng, n)
        a = tuple(rng.randint(-2, 2) for _ in range(n))
        b = rng.randint(-2, 2)
        parts = [p.intersect(Polyhedron(n, (constraint(a, rel, b),))) for rel in (">", "=", "<")]
        ok &= euler_char(p) == sum(euler_char(x) for x in parts)
        r = random_polyhedron(rng, 1)
        ok &= euler_char(product(p, r)) == euler_char(p) * euler_char(r)
    return ok, [("trials", trials)]


def ring_axioms(rng, trials=30):
    ok = True
    for _ in range(trials):
        a, b, c = random_motive(rng), random_motive(rng), random_motive(rng)
        ok &= (a + b) + c == a + (b + c) and a * b == b * a
        ok &= a * (b + c) == a * b + a * c and (a * b) * c == a * (b * c)
        q = rng.choice((2, 3, 5))
        ok &= specialize(a * b + c, q) == specialize(a, q) * specialize(b, q) + specialize(c, q)
    return ok, [("trials", trials)]


CHECKS = {
    "limit_axioms": limit_axioms,
    "annulus": annulus,
    "hadamard": hadamard_check,
    "limit_consistency": limit_consistency,
    "xk_arcs": xk_cross,
    "am_chi": am_chi,
    "ring_axioms": ring_axioms,
}


def run_check(name, seed=0, trials=None):
    rng = random.Random(seed)
    fn = CHECKS[name]
    if trials is None:
        return fn(rng)
    return fn(rng, trials)
