"""Nearby cycles and volume series from simple-normal-crossings resolution data."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .gring import L, LaurentPoly, LocalizedMotive
from .series import RationalSeries, limit_at_infinity


@dataclass(frozen=True)
class Component:
    N: int
    alpha: int

    def __post_init__(self):
        if self.N < 1 or self.alpha < 1:
            raise ValueError("multiplicity and weight must be >= 1")


@dataclass(frozen=True)
class ResolutionDatum:
    """Components (N_i, alpha_i), motives of the strata E_I, relative dimension d.

    ``strata`` maps frozensets of 1-based component indices to motives; absent
    subsets count as 0.  ``tags`` optionally records the covering order m_I,
    which must equal gcd(N_i : i in I); it is metadata only.
    """

    components: tuple
    strata: dict
    reldim: int
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.components)
        clean = {}
        for key, motive in self.strata.items():
            key = frozenset(key)
            if not key or not key <= set(range(1, n + 1)):
                raise ValueError(f"stratum {sorted(key)} is not a nonempty set of components")
            clean[key] = LocalizedMotive.coerce(motive)
        object.__setattr__(self, "strata", clean)
        for key, tag in self.tags.items():
            want = math.gcd(*(self.components[i - 1].N for i in key))
            if tag != want:
                raise ValueError(f"tag {tag} on stratum {sorted(key)} should be gcd {want}")

    def subsets(self):
        return sorted(self.strata, key=lambda s: (len(s), sorted(s)))


def nearby_cycles(res):
    total = LocalizedMotive(0)
    for key in res.subsets():
        total = total + LocalizedMotive((1 - L) ** (len(key) - 1)) * res.strata[key]
    return total


def volume_series(res):
    """L^-d sum_I (L - 1)^(|I|-1) [E_I] prod_{i in I} gen(-alpha_i, N_i)."""
    from .series import gen

    out = RationalSeries()
    scale = LocalizedMotive(LaurentPoly.monomial(-res.reldim))
    for key in res.subsets():
        coeff = scale * LocalizedMotive((L - 1) ** (len(key) - 1)) * res.strata[key]
        gens = tuple(gen(-res.components[i - 1].alpha, res.components[i - 1].N)
                     for i in sorted(key))
        out = out + RationalSeries(rational={gens: coeff})
    return out


def motivic_volume(res):
    return -limit_at_infinity(volume_series(res))


# ------------------------------------------------------- standard domains

FACTOR_KINDS = ("point", "closed_polydisc", "open_polydisc", "punctured_closed_polydisc", "annulus")


@dataclass(frozen=True)
class DomainFactor:
    kind: str
    n: int = 1
    ratio: Fraction = None

    def __post_init__(self):
        if self.kind not in FACTOR_KINDS:
            raise ValueError(f"unknown domain factor {self.kind!r}")
        if self.kind == "annulus":
            if self.ratio is None or Fraction(self.ratio) <= 0:
                raise ValueError("an annulus needs a positive ratio p/q")
        elif self.kind != "point" and self.n < 1:
            raise ValueError("polydisc dimension must be >= 1")

    def __str__(self):
        if self.kind == "annulus":
            r = Fraction(self.ratio)
            return f"annulus({r.numerator}/{r.denominator})"
        if self.kind == "point":
            return "point"
        return f"{self.kind}({self.n})"


def standard_volume(factors):
    """Volume of a product of standard domains, with warnings.

    Returns ``(motive, warnings)``.  The punctured closed polydisc is the
    closed polydisc minus a point, each of volume 1, hence 0; this rests on
    the point having volume 1, which is flagged when dimensions are mixed.
    """
    value = LocalizedMotive(1)
    warnings = []
    kinds = {f.kind for f in factors}
    for f in factors:
        if f.kind in ("point", "closed_polydisc"):
            continue
        if f.kind == "open_polydisc":
            value = value * LocalizedMotive(LaurentPoly.monomial(-f.n))
        else:
            value = LocalizedMotive(0)
    if "punctured_closed_polydisc" in kinds and len(factors) > 1:
        warnings.append("punctured factor relies on the convention volume(point) = 1")
    return value, warnings


def annulus_series(p, q):
    """sum_m (L - L^(1 - m r)) T^(m q) with r = min(p, 2q), in generator form."""
    r = min(p, 2 * q)
    return (RationalSeries.generator(0, q, L)
            - RationalSeries.generator(-r, q, L))


def annulus_count(p, q, m, qf):
    """#{phi in F_qf[t]/t^(2mq) : 0 <= ord(phi) < mp}, the closed form."""
    r = min(p, 2 * q)
    return qf ** (2 * m * q) - qf ** (2 * m * q - m * r)
