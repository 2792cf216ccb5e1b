"""Execute validated task files in declaration order."""

from __future__ import annotations

from fractions import Fraction

from .arcs import ArcTask, DEFAULT_BUDGET, count_arcs, count_set
from .errors import MotzetaError
from .gamma import (GradedPolyhedron, Polyhedron, a_m_sum, euler_char, graded_a_m_sum,
                    integrate_dchi, parse_rational)
from .gring import LaurentPoly, LocalizedMotive, parse_motive, specialize
from .identity import IdentityInstance, check_identity, check_termwise
from .nearby import motivic_volume, nearby_cycles, volume_series
from .properties import run_check
from .report import Report, TaskResult
from .series import RationalSeries, coefficient, fit_series, hadamard, limit_at_infinity, parse_series


def run(tf, budget=DEFAULT_BUDGET, seed=None):
    seed = tf.seed if seed is None else seed
    report = Report(seed=seed)
    for task in tf.tasks:
        result = TaskResult(task.name, task.kind, "ok",
                            echo=[(k, v) for k, v, _ in task.fields])
        try:
            values, passed, primary = _HANDLERS[task.kind](task.payload, budget, seed)
            result.values = values
            if "expect" in task.payload:
                match = _matches(primary, task.payload["expect"])
                result.values.append(("expected", task.payload["expect"]))
                passed = passed and match
            if not passed:
                result.status = "failed"
        except MotzetaError as exc:
            result.status, result.code, result.message = "error", exc.code, str(exc)
        except (ValueError, ZeroDivisionError) as exc:
            result.status, result.code, result.message = "error", type(exc).__name__, str(exc)
        report.results.append(result)
    return report


def _matches(value, text):
    if isinstance(value, bool):
        return text.strip().lower() == ("true" if value else "false")
    if isinstance(value, int):
        return value == int(text)
    if isinstance(value, Fraction):
        return value == parse_rational(text)
    if isinstance(value, LocalizedMotive):
        return value == parse_motive(text)
    if isinstance(value, RationalSeries):
        return value == parse_series(text, q=value.q)
    return str(value) == text.strip()


def _zeta(p, budget, seed):
    f, q = p["poly"], p["qf"]
    base = p.get("base", ("free",) * f.dim)
    d = sum(b != "zero" for b in base)
    data = []
    for m in p["levels"]:
        task = ArcTask(f, m, m + 1, q, base, p.get("origin"))
        data.append((m, Fraction(count_arcs(task, budget=budget), q ** (m * d))))
    values = [("coefficients", [v for _, v in data])]
    primary = None
    if "basis" in p:
        series = fit_series(data, p["basis"], q=q)
        primary = -limit_at_infinity(series)
        values += [("series", series), ("nearby cycles", primary)]
    return values, True, primary


def _nearby(p, budget, seed):
    res = p["resolution"]
    s = nearby_cycles(res)
    vol = motivic_volume(res)
    consistent = vol == LocalizedMotive(LaurentPoly.monomial(-res.reldim)) * s
    values = [("nearby cycles", s), ("motivic volume", vol), ("limit consistency", consistent)]
    for q in p.get("q", []):
        values.append((f"at q={q}", specialize(s, q)))
    return values, consistent, s


def _volume(p, budget, seed):
    res = p["resolution"]
    ser = volume_series(res)
    values = [("series", ser)]
    top = p.get("coefficients")
    if top:
        values.append(("coefficients", [coefficient(ser, m) for m in range(1, top + 1)]))
        for q in p.get("q", []):
            values.append((f"coefficients at q={q}",
                           [specialize(coefficient(ser, m), q) for m in range(1, top + 1)]))
    return values, True, ser


def _am_sum(p, budget, seed):
    dim, m = p["dim"], p["m"]
    if "cone" in p:
        shape = list(p["cone"])
    else:
        shape = Polyhedron(dim, tuple(p.get("constraint", [])))
    if "weight" in p:
        if not isinstance(shape, Polyhedron):
            raise ValueError("graded sums need a polyhedron, not cones")
        value = graded_a_m_sum(GradedPolyhedron(shape, p["weight"],
                                                p.get("weight_offset", Fraction(0))), m)
    else:
        value = a_m_sum(shape, m)
    values = [("a_m", value)]
    for q in p.get("q", []):
        values.append((f"at q={q}", specialize(value, q)))
    return values, True, value


def _euler(p, budget, seed):
    dim = p["dim"]
    pieces = sorted({k.split(".")[0] for k in p if k.endswith(".constraint")})
    if pieces:
        items = [(Polyhedron(dim, tuple(p[f"{name}.constraint"])),
                  p.get(f"{name}.value", LocalizedMotive(1))) for name in pieces]
        value = integrate_dchi(items)
        return [("integral", value)], True, value
    chi = euler_char(Polyhedron(dim, tuple(p.get("constraint", []))))
    return [("chi", chi)], True, chi


def _limit(p, budget, seed):
    value = limit_at_infinity(p["series"])
    return [("limit", value)], True, value


def _hadamard(p, budget, seed):
    h = hadamard(p["a"], p["b"])
    values = [("hadamard", h)]
    top = p.get("coefficients")
    if top:
        values.append(("coefficients", [coefficient(h, m) for m in range(1, top + 1)]))
    return values, True, h


def _arc_count(p, budget, seed):
    task = p["task"]
    method = p.get("method", "recursive")
    n = count_arcs(task, method, budget)
    xt = Fraction(n) * Fraction(task.qf) ** (task.n_active - task.trunc * task.n_active)
    return [("count", n), ("xtilde", xt)], True, n


def _count_set(p, budget, seed):
    spec = p["spec"]
    method = p.get("method", "recursive")
    n = count_set(spec, method, budget)
    task = spec.task
    xt = Fraction(n) * Fraction(task.qf) ** (task.n_active - task.trunc * task.n_active)
    return [("count", n), ("xtilde", xt)], True, n


def _instance(p):
    return IdentityInstance(p["poly"], p["blocks"], p["levels"], p["fields"],
                            p.get("basis"), p.get("rhs_basis"), p.get("resolution"),
                            p.get("method", "enumerate"))


def _checks_values(report):
    values = []
    for c in report.checks:
        text = "pass" if c.passed else "FAIL"
        if c.lhs is not None or c.rhs is not None:
            values.append((c.name, [text, c.lhs if c.lhs is not None else "-",
                                    c.rhs if c.rhs is not None else "-"]))
        else:
            values.append((c.name, text if not c.note else f"{text} ({c.note})"))
    return values


def _termwise(p, budget, seed):
    report = check_termwise(_instance(p), budget)
    values = [(f"counts qf={c['qf']} m={c['m']}",
               [c["X"], c["X0"], c["X1"], c["Xm"], c["X0m_h"], c["Y"]]) for c in report.cells]
    values += _checks_values(report)
    return values, report.passed, report.passed


def _identity(p, budget, seed):
    report = check_identity(_instance(p), budget)
    values = [(k, v) for k, v in report.series.items()]
    values += [(k, v) for k, v in report.values.items()]
    values += _checks_values(report)
    values += [("note", n) for n in report.notes]
    values += [(f"verdict qf={q}", ok) for q, ok in report.verdicts.items()]
    return values, report.passed, report.passed


def _property(p, budget, seed):
    passed, facts = run_check(p["check"], seed, p.get("trials"))
    return list(facts) + [("passed", passed)], passed, passed


_HANDLERS = {
    "zeta": _zeta, "nearby": _nearby, "volume_series": _volume, "am_sum": _am_sum,
    "euler": _euler, "limit": _limit, "hadamard": _hadamard, "arc_count": _arc_count,
    "count_set": _count_set, "check_termwise": _termwise, "check_identity": _identity,
    "property": _property,
}
