"""Counting truncated arcs over a prime field F_p.

An arc is a tuple of truncated power series in s with F_p coefficients.  Two
counting methods are provided:

* ``recursive``: a Hensel-style recursion on the lowest coefficients, exact
  and fast; coefficients above position m never affect ``f mod s^(m+1)``, so
  they only contribute a power of p.
* ``enumerate``: brute force over every coefficient tuple with numpy.  Slow,
  but it evaluates f on full arcs and so independently checks the recursion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, ParseError, UnsupportedShape

DEFAULT_BUDGET = 10 ** 9
BASES = ("free", "positive", "zero")


class IntPolynomial:
    """Integer polynomial in named variables; terms map exponent tuples to coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms):
        self.vars = tuple(variables)
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.vars):
                raise ValueError("exponent vector has the wrong length")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
        self.terms = {k: v for k, v in sorted(clean.items()) if v}

    @property
    def dim(self):
        return len(self.vars)

    def __eq__(self, other):
        return (isinstance(other, IntPolynomial) and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, tuple(self.terms.items())))

    def constant(self):
        return self.terms.get((0,) * self.dim, 0)

    def restrict(self, keep):
        """Set every variable outside ``keep`` (indices) to zero."""
        keep = list(keep)
        out = {}
        for exps, c in self.terms.items():
            if all(e == 0 for i, e in enumerate(exps) if i not in keep):
                key = tuple(exps[i] for i in keep)
                out[key] = out.get(key, 0) + c
        return IntPolynomial([self.vars[i] for i in keep], out)

    def substitute_scale(self, factors):
        """f(c_1 x_1, ..., c_d x_d) with integer factors c_i (exact over Z)."""
        out = {}
        for exps, c in self.terms.items():
            out[exps] = c * math.prod(f ** e for f, e in zip(factors, exps))
        return IntPolynomial(self.vars, out)

    def __str__(self):
        return render_polynomial(self)

    def __repr__(self):
        return f"IntPolynomial({self.vars!r}, {render_polynomial(self)!r})"


def render_polynomial(f):
    if not f.terms:
        return "0"
    order = sorted(f.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))
    parts = []
    for idx, (exps, c) in enumerate(order):
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(f.vars, exps) if e)
        a = abs(c)
        body = (str(a) if not mono else mono if a == 1 else f"{a}*{mono}")
        if idx == 0:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def parse_polynomial(text, variables=None):
    from .expr import parse_expr

    node = parse_expr(text)
    if variables is None:
        variables = sorted(_symbols(node))
    variables = list(variables)
    if len(set(variables)) != len(variables):
        raise ParseError("duplicate variable names")
    return IntPolynomial(variables, _poly_from_ast(node, variables))


def _symbols(node):
    if node[0] == "sym":
        return {node[1]}
    if node[0] in ("num",):
        return set()
    out = set()
    for child in node[1:]:
        if isinstance(child, tuple):
            out |= _symbols(child)
        elif isinstance(child, list):
            for c in child:
                out |= _symbols(c)
    return out


def _poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            k = tuple(x + y for x, y in zip(ea, eb))
            out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _poly_from_ast(node, variables):
    n = len(variables)
    kind = node[0]
    if kind == "num":
        return {(0,) * n: node[1]} if node[1] else {}
    if kind == "sym":
        if node[1] not in variables:
            raise ParseError(f"unknown variable {node[1]!r}")
        i = variables.index(node[1])
        return {tuple(int(j == i) for j in range(n)): 1}
    if kind == "neg":
        return {k: -v for k, v in _poly_from_ast(node[1], variables).items()}
    if kind == "pow":
        if node[2] < 0:
            raise ParseError("negative exponent in a polynomial")
        base = _poly_from_ast(node[1], variables)
        out = {(0,) * n: 1}
        for _ in range(node[2]):
            out = _poly_mul(out, base)
        return out
    if kind in ("add", "sub"):
        a = _poly_from_ast(node[1], variables)
        b = _poly_from_ast(node[2], variables)
        sign = 1 if kind == "add" else -1
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + sign * v
        return {k: v for k, v in out.items() if v}
    if kind == "mul":
        return _poly_mul(_poly_from_ast(node[1], variables), _poly_from_ast(node[2], variables))
    raise ParseError("only +, -, * and nonnegative powers are allowed in a polynomial")


# ------------------------------------------------------------------ tasks

@dataclass(frozen=True)
class Target:
    kind: str = "exact_tm"          # exact_tm | rv_t | ord_window
    lo: int = 0
    hi: int = 0

    def __str__(self):
        if self.kind == "ord_window":
            return f"ord_window {self.lo} {self.hi}"
        return self.kind


@dataclass(frozen=True)
class ArcTask:
    f: IntPolynomial
    m: int
    trunc: int
    qf: int
    base: tuple = None
    origin: tuple = None
    target: Target = field(default_factory=Target)

    def __post_init__(self):
        if self.base is None:
            object.__setattr__(self, "base", ("free",) * self.f.dim)
        if len(self.base) != self.f.dim or any(b not in BASES for b in self.base):
            raise ValueError("base needs one of free/positive/zero per variable")
        if self.origin is not None and len(self.origin) != self.f.dim:
            raise ValueError("origin needs one value per variable")
        if not _is_prime(self.qf) or self.qf > 7:
            raise ValueError("qf must be a prime <= 7")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.target.kind in ("exact_tm", "rv_t") and self.trunc < self.m + 1:
            raise ValueError("trunc must be at least m + 1")
        if self.target.kind == "ord_window" and not 0 <= self.target.lo <= self.target.hi:
            raise ValueError("ord_window needs 0 <= lo <= hi")

    @property
    def active(self):
        return [i for i, b in enumerate(self.base) if b != "zero"]

    @property
    def n_active(self):
        return len(self.active)


def _is_prime(n):
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


# ------------------------------------------------------ block predicates

BLOCK_NAMES = ("x", "y", "z")


def parse_predicate(text):
    """``true``, atoms like ``x_block_zero``, combined with and/or/not and parentheses."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def disj():
        node = conj()
        while peek() == "or":
            take()
            node = ("or", node, conj())
        return node

    def conj():
        node = unary()
        while peek() == "and":
            take()
            node = ("and", node, unary())
        return node

    def unary():
        tok = peek()
        if tok is None:
            raise ParseError(f"unexpected end of predicate {text!r}")
        take()
        if tok == "not":
            return ("not", unary())
        if tok == "(":
            node = disj()
            if peek() != ")":
                raise ParseError(f"missing ')' in predicate {text!r}")
            take()
            return node
        if tok == "true":
            return ("true",)
        for b in BLOCK_NAMES:
            if tok == f"{b}_block_zero":
                return ("zero", b)
            if tok == f"{b}_block_nonzero":
                return ("not", ("zero", b))
        raise ParseError(f"unknown predicate atom {tok!r}")

    node = disj()
    if peek() is not None:
        raise ParseError(f"trailing tokens in predicate {text!r}")
    return node


def render_predicate(node):
    kind = node[0]
    if kind == "true":
        return "true"
    if kind == "zero":
        return f"{node[1]}_block_zero"
    if kind == "not":
        inner = node[1]
        if inner[0] == "zero":
            return f"{inner[1]}_block_nonzero"
        return f"not ({render_predicate(inner)})"
    parts = [render_predicate(c) for c in node[1:]]
    wrap = [f"({p})" if c[0] in ("and", "or") and c[0] != kind else p
            for p, c in zip(parts, node[1:])]
    return f" {kind} ".join(wrap)


def _eval_predicate(node, zero):
    """``zero`` maps block name to a bool or a numpy bool array."""
    kind = node[0]
    if kind == "true":
        return True
    if kind == "zero":
        return zero[node[1]]
    if kind == "not":
        v = _eval_predicate(node[1], zero)
        return ~v if isinstance(v, np.ndarray) else not v
    a = _eval_predicate(node[1], zero)
    b = _eval_predicate(node[2], zero)
    return (a & b) if kind == "and" else (a | b)


def _atoms(node):
    if node[0] == "zero":
        return {node[1]}
    if node[0] == "true":
        return set()
    out = set()
    for c in node[1:]:
        out |= _atoms(c)
    return out


@dataclass(frozen=True)
class SetSpec:
    task: ArcTask
    blocks: tuple
    predicate: tuple = ("true",)

    def __post_init__(self):
        if sum(self.blocks) != self.task.f.dim or len(self.blocks) not in (2, 3):
            raise ValueError("blocks must partition the variables into (d1, d2[, d3])")

    def block_indices(self, name):
        k = BLOCK_NAMES.index(name)
        if k >= len(self.blocks):
            return []
        start = sum(self.blocks[:k])
        return list(range(start, start + self.blocks[k]))


# --------------------------------------------------- recursive counting

class _Counter:
    def __init__(self, p, budget):
        self.p = p
        self.budget = budget
        self.nodes = 0
        self.memo = {}

    def tick(self, k=1):
        self.nodes += k
        if self.nodes > self.budget:
            raise BudgetExceeded(f"counting visited more than {self.budget} nodes")

    def count(self, g, n, r, choices=None):
        """#{phi mod s^(r+1) : g(s, phi) = s^r mod s^(r+1)} with phi(0) in choices."""
        key = None
        if choices is None:
            key = (tuple(sorted(g.items())), n, r)
            if key in self.memo:
                return self.memo[key]
            choices = [range(self.p)] * n
        p = self.p
        g0 = {a: c for (k, a), c in g.items() if k == 0}
        total = 0
        for b in itertools.product(*choices):
            self.tick()
            v = _eval_mod(g0, b, p)
            if r == 0:
                total += v == 1
                continue
            if v:
                continue
            if any(_partial_mod(g0, b, i, p) for i in range(n)):
                # smooth point: each further coefficient cuts an affine hyperplane
                total += p ** ((n - 1) * r)
                continue
            h = _shift_substitute(g, b, r, p)
            if not h:
                continue
            e = min(k for k, _ in h)
            if e > r:
                continue
            hs = {(k - e, a): c for (k, a), c in h.items()}
            total += self.count(hs, n, r - e) * p ** (n * (e - 1))
        if key is not None:
            self.memo[key] = total
        return total


def _eval_mod(g0, b, p):
    total = 0
    for a, c in g0.items():
        term = c
        for bi, ai in zip(b, a):
            if ai:
                term = term * pow(bi, ai, p)
        total += term
    return total % p


def _partial_mod(g0, b, i, p):
    total = 0
    for a, c in g0.items():
        if not a[i]:
            continue
        term = c * a[i]
        for j, (bj, aj) in enumerate(zip(b, a)):
            e = aj - 1 if j == i else aj
            if e:
                term = term * pow(bj, e, p)
        total += term
    return total % p


def _shift_substitute(g, b, r, p):
    """g(s, b + s*psi) mod (p, s^(r+1)) as {(s_degree, psi_exponents): coeff}."""
    out = {}
    for (k, a), c in g.items():
        if k > r:
            continue
        ranges = [range(min(ai, r - k) + 1) for ai in a]
        for js in itertools.product(*ranges):
            deg = k + sum(js)
            if deg > r:
                continue
            coef = c
            for ai, ji, bi in zip(a, js, b):
                coef = coef * math.comb(ai, ji) * pow(bi, ai - ji, p)
            coef %= p
            if coef:
                key = (deg, js)
                out[key] = (out.get(key, 0) + coef) % p
    return {k: v for k, v in out.items() if v}


def _initial(f, keep, p):
    """f restricted to ``keep`` as an s-graded dict with reduced coefficients."""
    sub = f.restrict(keep)
    return {(0, a): c % p for a, c in sub.terms.items() if c % p}


def _count_recursive(task, zero_extra=(), budget=DEFAULT_BUDGET):
    if task.target.kind == "ord_window":
        raise UnsupportedShape("ord_window targets are counted by enumeration")
    p, m = task.qf, task.m
    keep = [i for i in task.active if i not in zero_extra]
    n = len(keep)
    g = _initial(task.f, keep, p)
    choices = []
    for i in keep:
        if task.origin is not None:
            choices.append([task.origin[i] % p])
        elif task.base[i] == "positive":
            choices.append([0])
        else:
            choices.append(range(p))
    counter = _Counter(p, budget)
    base_count = counter.count(g, n, m, choices)
    return base_count * p ** ((task.trunc - m - 1) * n), counter.nodes


# ------------------------------------------------- brute-force enumeration

def _series_mul(a, b, length, p):
    out = np.zeros((a.shape[0], length), dtype=np.int64)
    for k in range(length):
        acc = np.zeros(a.shape[0], dtype=np.int64)
        for i in range(k + 1):
            acc += a[:, i] * b[:, k - i]
        out[:, k] = acc % p
    return out


def _evaluate_series(f, arcs, length, p):
    """f(arcs) mod (p, s^length); arcs[i] has shape (N, >= length)."""
    nrows = arcs[0].shape[0] if arcs else 1
    total = np.zeros((nrows, length), dtype=np.int64)
    powers = {}
    for exps, c in f.terms.items():
        term = np.zeros((nrows, length), dtype=np.int64)
        term[:, 0] = 1
        for i, e in enumerate(exps):
            if not e:
                continue
            if (i, e) not in powers:
                acc = np.zeros((nrows, length), dtype=np.int64)
                acc[:, 0] = 1
                for _ in range(e):
                    acc = _series_mul(acc, arcs[i][:, :length], length, p)
                powers[(i, e)] = acc
            term = _series_mul(term, powers[(i, e)], length, p)
        total = (total + c * term) % p
    return total


def _enumerate(task, predicate=("true",), blocks=None, budget=DEFAULT_BUDGET, chunk=1 << 16):
    p, T, d = task.qf, task.trunc, task.f.dim
    # free coefficient slots (variable, position) and fixed values
    slots = []
    fixed = np.zeros((d, T), dtype=np.int64)
    for i, b in enumerate(task.base):
        if b == "zero":
            continue
        for k in range(T):
            if k == 0 and task.origin is not None:
                fixed[i, 0] = task.origin[i] % p
            elif k == 0 and b == "positive":
                continue
            else:
                slots.append((i, k))
    total_size = p ** len(slots)
    if total_size > budget:
        raise BudgetExceeded(f"enumeration of {total_size} arcs exceeds the budget {budget}")
    kind = task.target.kind
    length = T if kind == "ord_window" else task.m + 1
    block_of = {}
    if blocks is not None:
        for name in BLOCK_NAMES[:len(blocks)]:
            start = sum(blocks[:BLOCK_NAMES.index(name)])
            block_of[name] = list(range(start, start + blocks[BLOCK_NAMES.index(name)]))
    count = 0
    for start in range(0, total_size, chunk):
        idx = np.arange(start, min(start + chunk, total_size), dtype=np.int64)
        arcs = [np.tile(fixed[i], (idx.size, 1)) for i in range(d)]
        rest = idx.copy()
        for i, k in slots:
            arcs[i][:, k] = rest % p
            rest //= p
        vals = _evaluate_series(task.f, arcs, length, p)
        if kind == "ord_window":
            nz = vals != 0
            has = nz.any(axis=1)
            order = np.where(has, nz.argmax(axis=1), np.iinfo(np.int64).max)
            ok = (order >= task.target.lo) & (order < task.target.hi)
        else:
            m = task.m
            ok = (vals[:, :m] == 0).all(axis=1) & (vals[:, m] == 1)
        if predicate != ("true",):
            zero = {}
            for name, idxs in block_of.items():
                z = np.ones(idx.size, dtype=bool)
                for i in idxs:
                    z &= (arcs[i] == 0).all(axis=1)
                zero[name] = z
            pv = _eval_predicate(predicate, zero)
            ok = ok & pv
        count += int(np.count_nonzero(ok))
    return count


# ----------------------------------------------------------- public API

def count_arcs(task, method="recursive", budget=DEFAULT_BUDGET):
    """Number of truncated arcs satisfying the base constraints and the target."""
    if method == "enumerate" or task.target.kind == "ord_window":
        return _enumerate(task, budget=budget)
    if method != "recursive":
        raise ValueError(f"unknown counting method {method!r}")
    return _count_recursive(task, budget=budget)[0]


def count_set(spec, method="recursive", budget=DEFAULT_BUDGET):
    """Count arcs of ``spec.task`` whose blocks satisfy ``spec.predicate``."""
    task = spec.task
    if method == "enumerate" or task.target.kind == "ord_window":
        return _enumerate(task, spec.predicate, spec.blocks, budget=budget)
    if method != "recursive":
        raise ValueError(f"unknown counting method {method!r}")
    atoms = sorted(_atoms(spec.predicate))
    forced = {}

    def forced_count(names):
        key = frozenset(names)
        if key not in forced:
            extra = [i for nm in names for i in spec.block_indices(nm)]
            forced[key] = _count_recursive(task, extra, budget)[0]
        return forced[key]

    total = 0
    # inclusion-exclusion: exact[S] counts arcs whose zero blocks among atoms are exactly S
    for r in range(len(atoms) + 1):
        for chosen in itertools.combinations(atoms, r):
            zero = {a: a in chosen for a in atoms}
            if not _eval_predicate(spec.predicate, zero):
                continue
            others = [a for a in atoms if a not in chosen]
            exact = 0
            for k in range(len(others) + 1):
                for more in itertools.combinations(others, k):
                    exact += (-1) ** k * forced_count(chosen + more)
            total += exact
    return total


def xtilde(spec, method="recursive", budget=DEFAULT_BUDGET):
    """Normalized count ``count * qf^(-trunc*n + n)`` with n the active variables."""
    task = spec.task if isinstance(spec, SetSpec) else spec
    count = count_set(spec, method, budget) if isinstance(spec, SetSpec) else count_arcs(
        spec, method, budget)
    n = task.n_active
    return Fraction(count) * Fraction(task.qf) ** (n - task.trunc * n)


def weight_check(f, blocks):
    """True iff f(0) = 0 and every monomial has equal x-degree and y-degree."""
    if f.constant():
        return False
    d1, d2 = blocks[0], blocks[1]
    for exps in f.terms:
        if sum(exps[:d1]) != sum(exps[d1:d1 + d2]):
            return False
    return True
