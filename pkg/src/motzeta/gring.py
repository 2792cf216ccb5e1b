"""Exact arithmetic in Z[L, L^-1] and its localization at the family 1 - L^i.

``LaurentPoly`` is a sparse integer Laurent polynomial in the Lefschetz class L.
``LocalizedMotive`` is a fraction ``p(L) / prod_k (1 - L^{i_k})``; equality is
decided by cross-multiplication, so two motives compare equal exactly when they
agree after localization.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import reduce

from .errors import NotInvertible, PoleAtQ


class LaurentPoly:
    """Immutable map exponent -> nonzero integer coefficient."""

    __slots__ = ("_terms", "_key")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {0: terms} if terms else {}
        clean = {int(e): int(c) for e, c in dict(terms).items() if c}
        self._terms = clean
        self._key = tuple(sorted(clean.items()))

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls({exp: coeff})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls(value)
        raise TypeError(f"cannot interpret {value!r} as a Laurent polynomial")

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._key

    def is_zero(self):
        return not self._terms

    def min_exp(self):
        return self._key[0][0] if self._key else 0

    def max_exp(self):
        return self._key[-1][0] if self._key else 0

    def is_monomial(self):
        return len(self._key) == 1

    def constant(self):
        return self._terms.get(0, 0)

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._key == other._key

    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._key})

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._key:
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self._key})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = {}
        for e1, c1 in self._key:
            for e2, c2 in other._key:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if not self.is_monomial() or abs(self._key[0][1]) != 1:
                raise NotInvertible(f"{self} is not a unit of Z[L, L^-1]")
            (e, c), = self._key
            return LaurentPoly({e * k: c ** (-k)})
        result = LaurentPoly(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k):
        return LaurentPoly({e + k: c for e, c in self._key})

    def evaluate(self, q):
        q = Fraction(q)
        if q == 0 and self._key and self._key[0][0] < 0:
            raise PoleAtQ("negative power of L at q = 0")
        return sum((c * q ** e for e, c in self._key), Fraction(0))

    def exact_div(self, other):
        """Quotient in Z[L, L^-1], or None when ``other`` does not divide ``self``."""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        # shift to ordinary polynomials with nonzero constant term in the divisor
        a_shift, b_shift = self.min_exp(), other.min_exp()
        num = [0] * (self.max_exp() - a_shift + 1)
        for e, c in self._key:
            num[e - a_shift] = c
        den = [0] * (other.max_exp() - b_shift + 1)
        for e, c in other._key:
            den[e - b_shift] = c
        if len(den) > len(num):
            return None
        lead = den[-1]
        quot = [0] * (len(num) - len(den) + 1)
        for k in range(len(quot) - 1, -1, -1):
            top = num[k + len(den) - 1]
            if top % lead:
                return None
            qk = top // lead
            quot[k] = qk
            if qk:
                for j, d in enumerate(den):
                    num[k + j] -= qk * d
        if any(num):
            return None
        return LaurentPoly({k + a_shift - b_shift: c for k, c in enumerate(quot) if c})

    def __repr__(self):
        return f"LaurentPoly({render_laurent(self)!r})"

    def __str__(self):
        return render_laurent(self)


L = LaurentPoly.monomial(1)
ONE = LaurentPoly(1)


def one_minus_L(i):
    return LaurentPoly({0: 1, i: -1})


def render_laurent(p):
    """Canonical text: descending exponents, e.g. ``L^2 - 3*L + 1 - L^-1``."""
    if p.is_zero():
        return "0"
    parts = []
    for idx, (e, c) in enumerate(reversed(p.items())):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "L" if e == 1 else f"L^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        if idx == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


class LocalizedMotive:
    """Element ``numerator / prod(1 - L^i for i in denominator)`` of the localized ring."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator=0, denominator=()):
        num = LaurentPoly.coerce(numerator)
        den = sorted(int(i) for i in denominator)
        if any(i < 1 for i in den):
            raise ValueError("denominator exponents must be >= 1")
        num, den = _normalize(num, den)
        self.numerator = num
        self.denominator = tuple(den)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, LocalizedMotive):
            return value
        return cls(LaurentPoly.coerce(value))

    def is_zero(self):
        return self.numerator.is_zero()

    def is_laurent(self):
        return not self.denominator

    def as_laurent(self):
        if self.denominator:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.numerator

    def denominator_poly(self):
        return reduce(lambda acc, i: acc * one_minus_L(i), self.denominator, ONE)

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = LocalizedMotive(other)
        if not isinstance(other, LocalizedMotive):
            return NotImplemented
        if self.denominator == other.denominator:
            return self.numerator == other.numerator
        return (self.numerator * other.denominator_poly()
                == other.numerator * self.denominator_poly())

    def __hash__(self):
        # L -> 2 is never a pole, and any two equal fractions agree there
        return hash(self.specialize(2))

    def __bool__(self):
        return not self.is_zero()

    def __neg__(self):
        return LocalizedMotive(-self.numerator, self.denominator)

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = LocalizedMotive(other)
        if not isinstance(other, LocalizedMotive):
            return NotImplemented
        if self.denominator == other.denominator:
            return LocalizedMotive(self.numerator + other.numerator, self.denominator)
        ca, cb = Counter(self.denominator), Counter(other.denominator)
        common = ca | cb
        fa = _prod_factors(common - ca)
        fb = _prod_factors(common - cb)
        return LocalizedMotive(self.numerator * fa + other.numerator * fb,
                               common.elements())

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = LocalizedMotive(other)
        if not isinstance(other, LocalizedMotive):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LocalizedMotive.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = LocalizedMotive(other)
        if not isinstance(other, LocalizedMotive):
            return NotImplemented
        return LocalizedMotive(self.numerator * other.numerator,
                               self.denominator + other.denominator)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = LocalizedMotive(1)
        for _ in range(k):
            result = result * self
        return result

    def inverse(self):
        """Inverse in the localized ring; the numerator must be a unit times cyclotomic factors."""
        unit, powers = factor_localizable(self.numerator)
        # 1/Phi_d = -prod_{e | d, e < d} Phi_e / (1 - L^d)
        num = unit ** -1 * self.denominator_poly()
        den = []
        for d, k in powers.items():
            cofactor = LaurentPoly(-1)
            for e in range(1, d):
                if d % e == 0:
                    cofactor = cofactor * cyclotomic(e)
            num = num * cofactor ** k
            den.extend([d] * k)
        return LocalizedMotive(num, den)

    def __truediv__(self, other):
        return self * LocalizedMotive.coerce(other).inverse()

    def __rtruediv__(self, other):
        return LocalizedMotive.coerce(other) * self.inverse()

    def specialize(self, q):
        return specialize(self, q)

    def __repr__(self):
        return f"LocalizedMotive({render_motive(self)!r})"

    def __str__(self):
        return render_motive(self)


def _prod_factors(counter):
    out = ONE
    for i, k in counter.items():
        for _ in range(k):
            out = out * one_minus_L(i)
    return out


def _normalize(num, den):
    if num.is_zero():
        return num, []
    den = list(den)
    changed = True
    while changed and den:
        changed = False
        for i in sorted(set(den)):
            q = num.exact_div(one_minus_L(i))
            if q is not None:
                num = q
                den.remove(i)
                changed = True
                break
    return num, den


_CYCLOTOMIC = {}


def cyclotomic(d):
    """The d-th cyclotomic polynomial Phi_d(L)."""
    if d not in _CYCLOTOMIC:
        p = LaurentPoly({d: 1, 0: -1})
        for e in range(1, d):
            if d % e == 0:
                p = p.exact_div(cyclotomic(e))
        _CYCLOTOMIC[d] = p
    return _CYCLOTOMIC[d]


def factor_localizable(p):
    """Write ``p = u * prod_d Phi_d^k_d`` with ``u = +-L^s``.

    Returns ``(u, {d: k_d})``; raises NotInvertible when ``p`` has any other
    irreducible factor, i.e. when ``p`` is not a unit of the localized ring.
    """
    p = LaurentPoly.coerce(p)
    if p.is_zero():
        raise NotInvertible("zero is not invertible")
    shift = p.min_exp()
    rest = p.shift(-shift)
    powers = {}
    d = 1
    # Phi_d has degree phi(d) >= sqrt(d/2), so d <= 2*deg^2 bounds the search
    while rest.max_exp() > 0:
        if d > 2 * rest.max_exp() ** 2 + 2:
            raise NotInvertible(f"{p} is not invertible in the localized ring")
        q = rest.exact_div(cyclotomic(d))
        if q is None:
            d += 1
            continue
        powers[d] = powers.get(d, 0) + 1
        rest = q
    c = rest.constant()
    if abs(c) != 1:
        raise NotInvertible(f"{p} is not invertible in the localized ring")
    return LaurentPoly.monomial(shift, c), powers


def make_motive(num, denom_exponents=()):
    return LocalizedMotive(num, denom_exponents)


def motive_arith(a, b, op):
    a, b = LocalizedMotive.coerce(a), LocalizedMotive.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def specialize(m, q):
    """Value of the rational function at L = q, as an exact Fraction."""
    m = LocalizedMotive.coerce(m)
    q = Fraction(q)
    den = Fraction(1)
    for i in m.denominator:
        factor = 1 - q ** i
        if factor == 0:
            raise PoleAtQ(f"1 - q^{i} vanishes at q = {q}")
        den *= factor
    return m.numerator.evaluate(q) / den


def render_motive(m):
    """Canonical text, e.g. ``(L^2 - L)/((1 - L)*(1 - L^3))``."""
    m = LocalizedMotive.coerce(m)
    num = render_laurent(m.numerator)
    if not m.denominator:
        return num
    if not m.numerator.is_monomial() or m.numerator.items()[0][1] < 0:
        num = f"({num})"
    factors = [f"(1 - L)" if i == 1 else f"(1 - L^{i})" for i in m.denominator]
    den = factors[0] if len(factors) == 1 else "(" + "*".join(factors) + ")"
    return f"{num}/{den}"


def geometric_tail(step):
    """``sum_{k>=0} L^(-step*k)`` for step >= 1, i.e. ``-L^step / (1 - L^step)``."""
    if step < 1:
        raise ValueError("geometric series in L^-1 needs a positive step")
    return LocalizedMotive(LaurentPoly.monomial(step, -1), (step,))


def motive_from_ast(node):
    from .errors import ParseError

    kind = node[0]
    if kind == "num":
        return LocalizedMotive(node[1])
    if kind == "sym":
        if node[1] != "L":
            raise ParseError(f"unknown symbol {node[1]!r} in motive expression")
        return LocalizedMotive(L)
    if kind == "neg":
        return -motive_from_ast(node[1])
    if kind == "pow":
        return motive_from_ast(node[1]) ** node[2]
    if kind in ("add", "sub", "mul", "div"):
        a, b = motive_from_ast(node[1]), motive_from_ast(node[2])
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        return a / b
    raise ParseError(f"{node[1]!r}(...) is not allowed in a motive expression")


def parse_motive(text):
    from .expr import parse_expr

    return motive_from_ast(parse_expr(text))
