"""Rational series in T built from generators ``L^e T^i / (1 - L^e T^i)``.

A series is a finite polynomial part in T plus a finite combination of
products of generators.  Coefficients live either in the localized ring
(symbolic series, ``q is None``) or in Q with L specialized to the integer
``q`` (numeric series, used when fitting finite-field counts).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (Inconsistent, NonvanishingPolyPart, NotInvertible, ParseError,
                     Underdetermined, UnsupportedShape)
from .gring import L, LaurentPoly, LocalizedMotive, render_motive


@dataclass(frozen=True, order=True)
class Generator:
    # field order gives the canonical (i, e) sort
    i: int
    e: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("generator T-exponent must be >= 1")

    def __str__(self):
        return f"gen({self.e},{self.i})"


def gen(e, i):
    return Generator(i=i, e=e)


class _Coeffs:
    """Coefficient arithmetic: the localized ring, or Q with L = q."""

    def __init__(self, q=None):
        self.q = q

    def zero(self):
        return LocalizedMotive(0) if self.q is None else Fraction(0)

    def coerce(self, c):
        if self.q is None:
            return LocalizedMotive.coerce(c)
        if isinstance(c, (LaurentPoly, LocalizedMotive)):
            return LocalizedMotive.coerce(c).specialize(self.q)
        return Fraction(c)

    def lpow(self, e):
        if self.q is None:
            return LocalizedMotive(LaurentPoly.monomial(e))
        return Fraction(self.q) ** e


class RationalSeries:
    __slots__ = ("poly", "rational", "q")

    def __init__(self, poly=None, rational=None, q=None):
        ring = _Coeffs(q)
        self.q = q
        self.poly = {}
        for k, c in (poly or {}).items():
            if k < 0:
                raise ValueError("polynomial part needs nonnegative T-exponents")
            c = ring.coerce(c)
            if c:
                self.poly[k] = self.poly.get(k, ring.zero()) + c
        self.poly = {k: c for k, c in sorted(self.poly.items()) if c}
        rational_out = {}
        for key, c in (rational or {}).items():
            key = tuple(sorted(key))
            if not key:
                raise ValueError("a generator product needs at least one factor")
            c = ring.coerce(c)
            rational_out[key] = rational_out.get(key, ring.zero()) + c
        self.rational = {k: c for k, c in sorted(rational_out.items()) if c}

    @property
    def ring(self):
        return _Coeffs(self.q)

    @classmethod
    def constant(cls, c, q=None):
        return cls({0: c}, q=q)

    @classmethod
    def generator(cls, e, i, coeff=1, q=None):
        return cls(rational={(gen(e, i),): coeff}, q=q)

    def is_zero(self):
        return not self.poly and not self.rational

    def is_single_generator(self):
        return all(len(k) == 1 for k in self.rational)

    def _check(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly, LocalizedMotive)):
            return RationalSeries.constant(other, q=self.q)
        if not isinstance(other, RationalSeries):
            return None
        if other.q != self.q:
            raise ValueError("cannot mix series specialized at different q")
        return other

    def __eq__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self.poly == other.poly and self.rational == other.rational

    def __hash__(self):
        return hash((tuple(self.poly), tuple(self.rational)))

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        poly = dict(self.poly)
        for k, c in other.poly.items():
            poly[k] = poly[k] + c if k in poly else c
        rational = dict(self.rational)
        for k, c in other.rational.items():
            rational[k] = rational[k] + c if k in rational else c
        return RationalSeries(poly, rational, self.q)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.ring.coerce(c)
        return RationalSeries({k: v * c for k, v in self.poly.items()},
                              {k: v * c for k, v in self.rational.items()}, self.q)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly, LocalizedMotive)):
            return self.scale(other)
        other = self._check(other)
        if other is None:
            return NotImplemented
        out = RationalSeries(q=self.q)
        for a, ca in self.poly.items():
            for b, cb in other.poly.items():
                out = out + RationalSeries({a + b: ca * cb}, q=self.q)
        for k1, c1 in self.rational.items():
            for k2, c2 in other.rational.items():
                out = out + RationalSeries(rational={k1 + k2: c1 * c2}, q=self.q)
        for a, ca in self.poly.items():
            for k, c in other.rational.items():
                out = out + _tpow_times(a, k, self.q).scale(ca * c)
        for k, c in self.rational.items():
            for a, ca in other.poly.items():
                out = out + _tpow_times(a, k, self.q).scale(ca * c)
        return out

    __rmul__ = __mul__

    def coefficient(self, m):
        return coefficient(self, m)

    def __repr__(self):
        return f"RationalSeries({render_series(self)!r})"

    def __str__(self):
        return render_series(self)


def _tpow_times(a, key, q):
    """Rewrite ``T^a * prod(key)`` using ``T^i gen(e,i) = L^-e gen(e,i) - T^i``."""
    if a == 0:
        return RationalSeries(rational={key: 1}, q=q)
    if not key:
        return RationalSeries({a: 1}, q=q)
    for idx, g in enumerate(key):
        if a % g.i == 0:
            rest = key[:idx] + key[idx + 1:]
            # T^a K = L^-e T^(a-i) K - T^a rest
            return (_tpow_times(a - g.i, key, q).scale(_Coeffs(q).lpow(-g.e))
                    - _tpow_times(a, rest, q))
    raise UnsupportedShape(
        f"T^{a} times {'*'.join(map(str, key))} has no generator form")


def series_combine(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _key_coefficient(key, m):
    """Coefficient of T^m in prod(key) as a Laurent polynomial in L."""
    # partial[t] = coefficient of T^t after the generators processed so far
    partial = {0: LaurentPoly(1)}
    for g in key:
        nxt = {}
        for t, c in partial.items():
            k = 1
            while t + k * g.i <= m:
                s = t + k * g.i
                nxt[s] = nxt.get(s, LaurentPoly()) + c.shift(k * g.e)
                k += 1
        partial = nxt
    return partial.get(m, LaurentPoly())


def coefficient(s, m):
    ring = s.ring
    total = ring.zero()
    if m in s.poly:
        total = total + s.poly[m]
    for key, c in s.rational.items():
        k = _key_coefficient(key, m)
        if k:
            total = total + ring.coerce(k) * c
    return total


def limit_at_infinity(s):
    """The limit T -> infinity; a product of k generators tends to (-1)^k."""
    bad = [k for k in s.poly if k >= 1]
    if bad:
        raise NonvanishingPolyPart(f"polynomial part has a T^{bad[0]} term")
    total = s.poly.get(0, s.ring.zero())
    for key, c in s.rational.items():
        total = total + (c if len(key) % 2 == 0 else -c)
    return total


def hadamard(a, b):
    """Coefficientwise product of two single-generator combinations."""
    if a.q != b.q:
        raise ValueError("cannot mix series specialized at different q")
    for s in (a, b):
        if not s.is_single_generator():
            raise UnsupportedShape("Hadamard product needs single-generator combinations")
    ring = a.ring
    out = RationalSeries(q=a.q)
    for k, c in a.poly.items():
        cb = coefficient(b, k)
        if cb:
            out = out + RationalSeries({k: c * cb}, q=a.q)
    for k, c in b.poly.items():
        # a's poly-poly part is already counted above
        ca = coefficient(a, k) - a.poly.get(k, ring.zero())
        if ca:
            out = out + RationalSeries({k: c * ca}, q=a.q)
    for (g,), c in a.rational.items():
        for (h,), d in b.rational.items():
            big = g.i * h.i // gcd(g.i, h.i)
            e = (big // g.i) * g.e + (big // h.i) * h.e
            out = out + RationalSeries.generator(e, big, c * d, q=a.q)
    return out


def _det_bareiss(rows):
    """Determinant of a square matrix of Laurent polynomials (fraction-free)."""
    n = len(rows)
    if n == 0:
        return LaurentPoly(1)
    mat = [list(r) for r in rows]
    sign = 1
    prev = LaurentPoly(1)
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if mat[r][k]), None)
        if piv is None:
            return LaurentPoly()
        if piv != k:
            mat[k], mat[piv] = mat[piv], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]).exact_div(prev)
            mat[i][k] = LaurentPoly()
        prev = mat[k][k]
    return mat[n - 1][n - 1] * sign


def _rank_rows(rows, ncols):
    """Rank over the fraction field and the original indices of independent rows."""
    mat = [list(r) for r in rows]
    order = list(range(len(mat)))
    prev = None
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        order[rank], order[piv] = order[piv], order[rank]
        for i in range(rank + 1, len(mat)):
            for j in range(col + 1, ncols):
                v = mat[i][j] * mat[rank][col] - mat[i][col] * mat[rank][j]
                mat[i][j] = v if prev is None else v.exact_div(prev)
            mat[i][col] = mat[i][col] * 0
        prev = mat[rank][col]
        rank += 1
    return rank, sorted(order[:rank])


def _rank_fraction(rows, ncols):
    mat = [list(r) for r in rows]
    order = list(range(len(mat)))
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        order[rank], order[piv] = order[piv], order[rank]
        for i in range(rank + 1, len(mat)):
            f = mat[i][col] / mat[rank][col]
            if f:
                for j in range(col, ncols):
                    mat[i][j] -= f * mat[rank][j]
        rank += 1
    return rank, sorted(order[:rank]), mat


def _solve_fraction(a, b):
    n = len(a)
    mat = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col])
        mat[col], mat[piv] = mat[piv], mat[col]
        for i in range(n):
            if i != col and mat[i][col]:
                f = mat[i][col] / mat[col][col]
                for j in range(col, n + 1):
                    mat[i][j] -= f * mat[col][j]
    return [mat[i][n] / mat[i][i] for i in range(n)]


def _basis_key(g):
    if isinstance(g, Generator):
        return (g,)
    return tuple(sorted(g))


def fit_series(coeffs, basis, q=None):
    """Unique combination of ``basis`` matching every supplied coefficient.

    ``coeffs`` is a list of ``(m, value)``; ``basis`` holds generators or
    tuples of generators (products).  With ``q`` set, values are rationals and
    the fit happens with L specialized to q.
    """
    keys = [_basis_key(g) for g in basis]
    if len(set(keys)) != len(keys):
        raise ValueError("basis elements must be distinct")
    ring = _Coeffs(q)
    data = [(m, ring.coerce(v)) for m, v in coeffs]
    if not keys or all(not v for _, v in data):
        if all(not v for _, v in data):
            return RationalSeries(q=q)
        raise Inconsistent("empty basis cannot match nonzero coefficients")
    if q is None:
        solution = _fit_symbolic(data, keys)
    else:
        solution = _fit_numeric(data, keys, q)
    result = RationalSeries(rational=dict(zip(keys, solution)), q=q)
    for m, v in data:
        if coefficient(result, m) != v:
            raise Inconsistent(f"fit does not reproduce the coefficient at T^{m}")
    return result


def _fit_numeric(data, keys, q):
    ring = _Coeffs(q)
    a = [[ring.coerce(_key_coefficient(k, m)) for k in keys] for m, _ in data]
    b = [v for _, v in data]
    n = len(keys)
    rank_a, rows, _ = _rank_fraction(a, n)
    rank_ab, _, _ = _rank_fraction([r + [v] for r, v in zip(a, b)], n + 1)
    if rank_ab > rank_a:
        raise Inconsistent("no combination of the basis matches the coefficients")
    if rank_a < n:
        raise Underdetermined(f"basis of size {n} has only rank {rank_a} on the data")
    return _solve_fraction([a[r] for r in rows], [b[r] for r in rows])


def _fit_symbolic(data, keys):
    n = len(keys)
    # clear denominators so that the system lives in Z[L, L^-1]
    total = Counter()
    for _, v in data:
        total = total | Counter(v.denominator)
    dpoly = LocalizedMotive(1, list(total.elements())).inverse().as_laurent()
    a = [[_key_coefficient(k, m) for k in keys] for m, _ in data]
    b = [(v * dpoly).as_laurent() for _, v in data]
    rank_a, rows = _rank_rows(a, n)
    rank_ab, _ = _rank_rows([r + [v] for r, v in zip(a, b)], n + 1)
    if rank_ab > rank_a:
        raise Inconsistent("no combination of the basis matches the coefficients")
    if rank_a < n:
        raise Underdetermined(f"basis of size {n} has only rank {rank_a} on the data")
    sub = [a[r] for r in rows]
    rhs = [b[r] for r in rows]
    det = _det_bareiss(sub)
    try:
        inv = LocalizedMotive(det * dpoly).inverse()
    except NotInvertible as exc:
        raise Inconsistent(f"solution leaves the localized ring: {exc}") from None
    out = []
    for j in range(n):
        cols = [row[:j] + [r] + row[j + 1:] for row, r in zip(sub, rhs)]
        out.append(LocalizedMotive(_det_bareiss(cols)) * inv)
    return out


# ---------------------------------------------------------------- text form

def _render_coeff(c, q):
    if q is None:
        return render_motive(c)
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term(c, body, q):
    """Render ``c*body``; returns (negative, text)."""
    if q is None:
        num = c.numerator
        if not c.denominator and num.is_monomial():
            (e, k), = num.items()
            neg = k < 0
            k = abs(k)
            mono = "" if e == 0 else ("L" if e == 1 else f"L^{e}")
            if not body:
                lead = mono if k == 1 and mono else (f"{k}*{mono}" if mono else str(k))
                return neg, lead
            if k == 1:
                return neg, f"{mono}*{body}" if mono else body
            return neg, f"{k}*{mono}*{body}" if mono else f"{k}*{body}"
        text = f"({_render_coeff(c, q)})"
        return False, f"{text}*{body}" if body else text
    c = Fraction(c)
    neg = c < 0
    c = abs(c)
    if not body:
        return neg, _render_coeff(c, q)
    if c == 1:
        return neg, body
    text = str(c) if c.denominator == 1 else f"({c})"
    return neg, f"{text}*{body}"


def render_series(s):
    parts = []
    for k, c in s.poly.items():
        body = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
        parts.append(_term(c, body, s.q))
    for key, c in s.rational.items():
        parts.append(_term(c, "*".join(map(str, key)), s.q))
    if not parts:
        return "0"
    out = ""
    for idx, (neg, text) in enumerate(parts):
        if idx == 0:
            out = "-" + text if neg else text
        else:
            out += (" - " if neg else " + ") + text
    return out


def _value_from_ast(node, q):
    """Evaluate to a RationalSeries (constants are constant series)."""
    from .expr import int_value

    ring = _Coeffs(q)
    kind = node[0]
    if kind == "num":
        return RationalSeries.constant(node[1], q=q)
    if kind == "sym":
        if node[1] == "L":
            return RationalSeries.constant(ring.coerce(L), q=q)
        if node[1] == "T":
            return RationalSeries({1: 1}, q=q)
        raise ParseError(f"unknown symbol {node[1]!r} in series expression")
    if kind == "neg":
        return -_value_from_ast(node[1], q)
    if kind == "call":
        name, args = node[1], node[2]
        if name == "gen":
            if len(args) != 2:
                raise ParseError("gen takes two arguments")
            e, i = int_value(args[0]), int_value(args[1])
            if i < 1:
                raise ParseError("gen needs a positive T-exponent")
            return RationalSeries.generator(e, i, q=q)
        if name == "had":
            if len(args) != 2:
                raise ParseError("had takes two arguments")
            return hadamard(_value_from_ast(args[0], q), _value_from_ast(args[1], q))
        if name == "lim":
            if len(args) != 1:
                raise ParseError("lim takes one argument")
            return RationalSeries.constant(limit_at_infinity(_value_from_ast(args[0], q)), q=q)
        raise ParseError(f"unknown function {name!r}")
    if kind == "pow":
        base = _value_from_ast(node[1], q)
        k = node[2]
        if base.rational or any(e for e in base.poly):
            if k < 0:
                raise ParseError("negative powers of a nonconstant series are not allowed")
            out = RationalSeries.constant(1, q=q)
            for _ in range(k):
                out = out * base
            return out
        return RationalSeries.constant(_const(base, q) ** k, q=q)
    a, b = _value_from_ast(node[1], q), _value_from_ast(node[2], q)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if b.rational or any(e for e in b.poly):
            raise ParseError("can only divide by a constant")
        c = _const(b, q)
        if not c:
            raise ParseError("division by zero")
        inv = c.inverse() if q is None else 1 / c
        return a.scale(inv)
    raise ParseError(f"unsupported expression {kind!r}")


def _const(s, q):
    return s.poly.get(0, _Coeffs(q).zero())


def parse_series(text, q=None):
    from .expr import parse_expr

    return _value_from_ast(parse_expr(text), q)


def motive_or_series(text):
    """Parse text; a constant result is returned as its coefficient."""
    s = parse_series(text)
    if not s.rational and all(k == 0 for k in s.poly):
        return _const(s, None)
    return s
