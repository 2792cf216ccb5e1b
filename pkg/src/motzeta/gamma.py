"""Rational polyhedra in Q^n: lattice sums a_m, graded sums, and the o-minimal
Euler characteristic.

Feasibility and coordinate bounds use Fourier-Motzkin elimination with
strictness flags, which is exact over Q and fast enough for n <= 4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (DimensionTooLarge, InfiniteGrading, OverlappingPieces,
                     ParseError, Unbounded, UnsupportedShape)
from .gring import L, LaurentPoly, LocalizedMotive, geometric_tail

RELATIONS = (">=", ">", "=")


@dataclass(frozen=True)
class Constraint:
    a: tuple
    b: Fraction
    rel: str

    def holds(self, x):
        v = sum(ai * xi for ai, xi in zip(self.a, x))
        if self.rel == ">=":
            return v >= self.b
        if self.rel == ">":
            return v > self.b
        return v == self.b

    def __str__(self):
        return ", ".join(_frac_text(c) for c in self.a) + f" {self.rel} {_frac_text(self.b)}"


def _frac_text(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def constraint(a, rel, b):
    """Build ``a . x rel b``; ``<=`` and ``<`` are flipped into ``>=`` and ``>``."""
    a = tuple(Fraction(c) for c in a)
    b = Fraction(b)
    if rel in ("<=", "<"):
        a, b, rel = tuple(-c for c in a), -b, ">=" if rel == "<=" else ">"
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    return Constraint(a, b, rel)


@dataclass(frozen=True)
class Polyhedron:
    dim: int
    constraints: tuple = ()

    def __post_init__(self):
        for c in self.constraints:
            if len(c.a) != self.dim:
                raise ValueError(f"constraint {c} does not have length {self.dim}")

    def contains(self, x):
        return all(c.holds(x) for c in self.constraints)

    def intersect(self, other):
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Polyhedron(self.dim, self.constraints + other.constraints)

    def is_empty(self):
        return not _feasible(_halfspaces(self.constraints), self.dim)

    def bounds(self, j):
        return coordinate_bounds(self, j)

    def __str__(self):
        return "; ".join(map(str, self.constraints)) or f"Q^{self.dim}"


def polyhedron(dim, rows):
    """``rows`` are (a, rel, b) triples."""
    return Polyhedron(dim, tuple(constraint(a, rel, b) for a, rel, b in rows))


def interval(lo=None, hi=None, lo_open=False, hi_open=False):
    rows = []
    if lo is not None:
        rows.append(((1,), ">" if lo_open else ">=", lo))
    if hi is not None:
        rows.append(((1,), "<" if hi_open else "<=", hi))
    return polyhedron(1, rows)


def point(coords):
    n = len(coords)
    rows = [(tuple(int(i == j) for i in range(n)), "=", c) for j, c in enumerate(coords)]
    return polyhedron(n, rows)


def product(p, r):
    n = p.dim + r.dim
    cons = [Constraint(c.a + (Fraction(0),) * r.dim, c.b, c.rel) for c in p.constraints]
    cons += [Constraint((Fraction(0),) * p.dim + c.a, c.b, c.rel) for c in r.constraints]
    return Polyhedron(n, tuple(cons))


def parse_constraint(text, dim=None):
    """Parse ``a1, ..., an REL b`` with exact rationals, e.g. ``1, -1/2 >= 0``."""
    for rel in (">=", "<=", ">", "<", "="):
        if rel in text:
            left, right = text.split(rel, 1)
            break
    else:
        raise ParseError(f"no relation in constraint {text!r}")
    try:
        a = [parse_rational(t) for t in left.split(",")]
        b = parse_rational(right)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad constraint {text!r}: {exc}") from None
    if dim is not None and len(a) != dim:
        raise ParseError(f"constraint {text!r} needs {dim} coefficients")
    return constraint(a, rel, b)


def parse_rational(text):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        if int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


# ---------------------------------------------------------- Fourier-Motzkin

def _halfspaces(constraints):
    """(a, b, strict) triples meaning a.x >= b or a.x > b."""
    out = []
    for c in constraints:
        if c.rel == "=":
            out.append((c.a, c.b, False))
            out.append((tuple(-x for x in c.a), -c.b, False))
        else:
            out.append((c.a, c.b, c.rel == ">"))
    return out


def _scaled(h):
    a, b, strict = h
    lead = next((abs(x) for x in a if x), None)
    if lead is None:
        return h
    return tuple(x / lead for x in a), b / lead, strict


def _eliminate(hs, k):
    pos, neg, rest = [], [], []
    for h in hs:
        (pos if h[0][k] > 0 else neg if h[0][k] < 0 else rest).append(h)
    out = set(rest)
    for (ap, bp, sp), (an, bn, sn) in itertools.product(pos, neg):
        fp, fn = 1 / ap[k], -1 / an[k]
        a = tuple(fp * x + fn * y for x, y in zip(ap, an))
        out.add(_scaled((a, fp * bp + fn * bn, sp or sn)))
    return _prune(out)


def _prune(hs):
    """Drop trivially true constraints; return None if a trivial one fails."""
    out = []
    for a, b, strict in hs:
        if any(a):
            out.append((a, b, strict))
        elif (0 < b) or (strict and b == 0):
            return None
    return out


def _feasible(hs, n):
    hs = _prune([_scaled(h) for h in hs])
    for k in range(n):
        if hs is None:
            return False
        hs = _eliminate(hs, k)
    return hs is not None


def _project(hs, n, keep):
    """Constraints on coordinate ``keep`` alone, or None if infeasible."""
    hs = _prune([_scaled(h) for h in hs])
    for k in range(n):
        if hs is None:
            return None
        if k != keep:
            hs = _eliminate(hs, k)
    return hs


@dataclass(frozen=True)
class Bound:
    lo: Fraction = None
    lo_strict: bool = False
    hi: Fraction = None
    hi_strict: bool = False
    empty: bool = False

    @property
    def bounded(self):
        return self.lo is not None and self.hi is not None


def _bound_from(hs, keep):
    if hs is None:
        return Bound(empty=True)
    lo = hi = None
    lo_s = hi_s = False
    for a, b, strict in hs:
        v = b / a[keep]
        if a[keep] > 0:
            if lo is None or v > lo or (v == lo and strict):
                lo, lo_s = v, strict if (lo is None or v > lo) else (lo_s or strict)
        else:
            if hi is None or v < hi or (v == hi and strict):
                hi, hi_s = v, strict if (hi is None or v < hi) else (hi_s or strict)
    return Bound(lo, lo_s, hi, hi_s)


def coordinate_bounds(p, j):
    return _bound_from(_project(_halfspaces(p.constraints), p.dim, j), j)


def linear_range(p, c, c0=0):
    """Range of ``c . x + c0`` over ``p``, as a Bound."""
    n = p.dim
    t = constraint(tuple(-Fraction(x) for x in c) + (1,), "=", c0)
    lifted = [Constraint(h.a + (Fraction(0),), h.b, h.rel) for h in p.constraints]
    return _bound_from(_project(_halfspaces(lifted + [t]), n + 1, n), n)


# ------------------------------------------------------------ lattice sums

def _substitute(p, value):
    """Fix the first coordinate and return the polyhedron in the others."""
    cons = tuple(Constraint(c.a[1:], c.b - c.a[0] * value, c.rel) for c in p.constraints)
    return Polyhedron(p.dim - 1, cons)


def _grid(bound, m):
    lo = math.ceil(bound.lo * m)
    hi = math.floor(bound.hi * m)
    for k in range(lo, hi + 1):
        v = Fraction(k, m)
        if (bound.lo_strict and v == bound.lo) or (bound.hi_strict and v == bound.hi):
            continue
        yield v


def lattice_points(p, m):
    """All points of p in (1/m)Z^n, in lexicographic order."""
    if p.dim == 0:
        return [()] if p.contains(()) else []
    for j in range(p.dim):
        b = coordinate_bounds(p, j)
        if b.empty:
            return []
        if not b.bounded:
            raise Unbounded(f"coordinate {j + 1} is unbounded")
    return list(_points(p, m))


def _points(p, m):
    if p.dim == 0:
        if p.contains(()):
            yield ()
        return
    b = coordinate_bounds(p, 0)
    if b.empty:
        return
    for v in _grid(b, m):
        for rest in _points(_substitute(p, v), m):
            yield (v,) + rest


def _weight(points, m, n):
    total = LaurentPoly()
    for g in points:
        total = total + LaurentPoly.monomial(-int(m * sum(g)))
    return total * (L - 1) ** n


@dataclass(frozen=True)
class ConePiece:
    """The set ``v + sum_j lambda_j r_j`` with lambda_j >= 0 (> 0 for open rays).

    Rays must be linearly independent integer vectors with positive
    coordinate sum, so that the lattice sum converges in L^-1.
    """

    vertex: tuple
    rays: tuple
    open_rays: tuple = field(default=())

    @property
    def dim(self):
        return len(self.vertex)


@dataclass(frozen=True)
class ProductPiece:
    factors: tuple

    @property
    def dim(self):
        return sum(f.dim for f in self.factors)


def a_m_sum(p, m):
    """sum over (1/m)-lattice points of L^(-m|g|) (L - 1)^n, in closed form."""
    if isinstance(p, (list, tuple)):
        return sum((a_m_sum(x, m) for x in p), LocalizedMotive(0))
    if isinstance(p, ProductPiece):
        out = LocalizedMotive(1)
        for f in p.factors:
            out = out * a_m_sum(f, m)
        return out
    if isinstance(p, ConePiece):
        return _cone_sum(p, m)
    bounds = [coordinate_bounds(p, j) for j in range(p.dim)]
    if any(b.empty for b in bounds):
        return LocalizedMotive(0)
    if all(b.bounded for b in bounds):
        return LocalizedMotive(_weight(_points(p, m), m, p.dim))
    if any(b.lo is None for b in bounds):
        raise Unbounded("a_m needs every coordinate bounded below")
    if all(sum(1 for x in c.a if x) == 1 for c in p.constraints):
        return _box_sum(p, bounds, m)
    raise UnsupportedShape("unbounded polyhedron is neither a box nor a declared cone")


def _box_sum(p, bounds, m):
    out = LocalizedMotive(1)
    for j, b in enumerate(bounds):
        if b.bounded:
            pts = [(v,) for v in _grid(b, m)]
            out = out * LocalizedMotive(_weight(pts, m, 1))
            continue
        first = math.ceil(b.lo * m)
        if b.lo_strict and Fraction(first, m) == b.lo:
            first += 1
        out = out * LocalizedMotive((L - 1) * LaurentPoly.monomial(-first)) * geometric_tail(1)
    return out


def _solve_coords(rays, x):
    """lambda with sum lambda_j r_j = x, or None if x is outside the span."""
    n, k = len(x), len(rays)
    mat = [[Fraction(rays[j][i]) for j in range(k)] + [Fraction(x[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((r for r in range(row, n) if mat[r][col]), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        for r in range(n):
            if r != row and mat[r][col]:
                f = mat[r][col] / mat[row][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    if any(mat[r][k] for r in range(row, n)):
        return None
    lam = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        lam[col] = mat[r][k] / mat[r][col]
    return lam


def _cone_sum(c, m):
    n = c.dim
    rays = [tuple(int(x) for x in r) for r in c.rays]
    if _rank(rays) != len(rays):
        raise UnsupportedShape("cone rays must be linearly independent")
    out = LocalizedMotive(1)
    for r in rays:
        w = sum(r)
        if w < 1:
            raise UnsupportedShape(f"ray {r} does not decrease the weight; the sum diverges")
        g = math.gcd(*r)
        # primitive step of the (1/m)-lattice along the ray has weight |r|/g
        out = out * geometric_tail(w // g)
    steps = [tuple(Fraction(x, math.gcd(*r) * m) for x in r) for r in rays]
    # fundamental parallelepiped of the steps, translated to the vertex
    open_idx = set(c.open_rays)
    corners = [tuple(Fraction(v) + sum(s[i] * pick[j] for j, s in enumerate(steps))
                     for i, v in enumerate(c.vertex))
               for pick in itertools.product((0, 1), repeat=len(steps))]
    lo = [min(x[i] for x in corners) for i in range(n)]
    hi = [max(x[i] for x in corners) for i in range(n)]
    total = LaurentPoly()
    for pt in itertools.product(*[[Fraction(k, m) for k in range(math.ceil(lo[i] * m),
                                                                 math.floor(hi[i] * m) + 1)]
                                  for i in range(n)]):
        lam = _solve_coords(steps, [pt[i] - c.vertex[i] for i in range(n)])
        if lam is None:
            continue
        ok = all((0 < x <= 1) if j in open_idx else (0 <= x < 1) for j, x in enumerate(lam))
        if ok:
            total = total + LaurentPoly.monomial(-int(m * sum(pt)))
    return out * LocalizedMotive(total * (L - 1) ** n)


def _rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class GradedPolyhedron:
    base: Polyhedron
    weight: tuple
    offset: Fraction = Fraction(0)

    def value(self, x):
        return sum(Fraction(c) * xi for c, xi in zip(self.weight, x)) + Fraction(self.offset)


def graded_a_m_sum(gp, m):
    """Graded lattice sum; e-terms with m*e not a natural number are dropped."""
    base = gp.base
    n = base.dim
    bounds = [coordinate_bounds(base, j) for j in range(n)]
    if any(b.empty for b in bounds):
        return LocalizedMotive(0)
    if all(b.bounded for b in bounds):
        total = LaurentPoly()
        for g in _points(base, m):
            me = m * gp.value(g)
            if me.denominator == 1 and me >= 0:
                total = total + LaurentPoly.monomial(-int(m * sum(g) + me))
        return LocalizedMotive(total * (L - 1) ** n)
    rng = linear_range(base, gp.weight, gp.offset)
    if not rng.bounded:
        raise InfiniteGrading("the weight takes infinitely many values on the base")
    # the weight lives in (1/(m*D))Z + offset where D clears its denominators
    den = m * math.lcm(*[Fraction(c).denominator for c in gp.weight])
    out = LocalizedMotive(0)
    off = Fraction(gp.offset)
    for k in range(math.ceil((rng.lo - off) * den), math.floor((rng.hi - off) * den) + 1):
        e = off + Fraction(k, den)
        me = m * e
        if me.denominator != 1 or me < 0:
            continue
        fiber = base.intersect(Polyhedron(n, (constraint(gp.weight, "=", e - off),)))
        piece = a_m_sum(fiber, m)
        if piece:
            out = out + piece * LocalizedMotive(LaurentPoly.monomial(-int(me)))
    return out


# ---------------------------------------------------- Euler characteristic

def euler_char(p):
    """o-minimal Euler characteristic, summed over relatively open faces.

    A face is fixed by the set of weak inequalities that are tight on it; the
    face is a relatively open convex set, so it contributes (-1)^dim.
    """
    if p.dim > 3:
        raise DimensionTooLarge(f"Euler characteristic supports n <= 3, got {p.dim}")
    eqs = [c for c in p.constraints if c.rel == "="]
    weak = [c for c in p.constraints if c.rel == ">="]
    strict = [c for c in p.constraints if c.rel == ">"]
    chi = 0
    for pick in itertools.product((False, True), repeat=len(weak)):
        tight = [Constraint(c.a, c.b, "=") for c, t in zip(weak, pick) if t]
        loose = [Constraint(c.a, c.b, ">") for c, t in zip(weak, pick) if not t]
        face = Polyhedron(p.dim, tuple(eqs + tight + loose + strict))
        if face.is_empty():
            continue
        dim = p.dim - _rank([c.a for c in eqs + tight]) if eqs or tight else p.dim
        chi += (-1) ** dim
    return chi


def integrate_dchi(pieces):
    """sum c_i chi(P_i) over pairwise disjoint pieces."""
    pieces = list(pieces)
    for (i, (p, _)), (j, (r, _)) in itertools.combinations(enumerate(pieces), 2):
        if not p.intersect(r).is_empty():
            raise OverlappingPieces(f"pieces {i + 1} and {j + 1} intersect")
    total = LocalizedMotive(0)
    for p, c in pieces:
        chi = euler_char(p)
        if chi:
            total = total + LocalizedMotive.coerce(c) * chi
    return total
