"""Slow, independent reference computations used to freeze expected values."""

import itertools
from fractions import Fraction


def poly_mul_trunc(a, b, n, p):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[:n - i]):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def eval_arc(terms, arcs, n, p):
    """terms: {exponent tuple: coeff}; arcs: coefficient lists; result mod (p, t^n)."""
    total = [0] * n
    for exps, c in terms.items():
        acc = [1] + [0] * (n - 1)
        for arc, e in zip(arcs, exps):
            for _ in range(e):
                acc = poly_mul_trunc(acc, arc, n, p)
        total = [(t + c * a) % p for t, a in zip(total, acc)]
    return total


def arcs_for(base, trunc, p):
    """All coefficient lists for one variable under a base constraint."""
    if base == "zero":
        return [[0] * trunc]
    first = [0] if base == "positive" else range(p)
    return [[a0, *rest] for a0 in first for rest in itertools.product(range(p), repeat=trunc - 1)]


def count(terms, bases, m, trunc, p, keep=None):
    """#{arcs : f = t^m mod t^(m+1)}; keep(arcs) filters further."""
    choices = [arcs_for(b, trunc, p) for b in bases]
    total = 0
    for arcs in itertools.product(*choices):
        val = eval_arc(terms, arcs, m + 1, p)
        if all(v == 0 for v in val[:m]) and val[m] == 1 and (keep is None or keep(arcs)):
            total += 1
    return total


def series_at(spec, q, top):
    """Expand sum c * prod gen(e,i) at L = q to T^top; spec is [(c, [(e, i), ...])]."""
    out = [Fraction(0)] * (top + 1)
    for c, gens in spec:
        acc = [Fraction(1)] + [Fraction(0)] * top
        for e, i in gens:
            g = [Fraction(0)] * (top + 1)
            for k in range(1, top // i + 1):
                g[k * i] = Fraction(q) ** (k * e)
            acc = [sum(acc[j] * g[n - j] for j in range(n + 1)) for n in range(top + 1)]
        out = [o + c * a for o, a in zip(out, acc)]
    return out


def lattice_sum(inside, box, m, q):
    """sum over (1/m)Z^n points of the box satisfying inside of q^(-m|g|) (q - 1)^n."""
    n = len(box)
    total = Fraction(0)
    axes = [range(lo * m, hi * m + 1) for lo, hi in box]
    for pt in itertools.product(*axes):
        g = [Fraction(k, m) for k in pt]
        if inside(g):
            total += Fraction(q) ** (-m * sum(g)) * (q - 1) ** n
    return total
