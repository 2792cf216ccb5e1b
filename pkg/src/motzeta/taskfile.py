"""Line-oriented task files.

    motzeta 1
    seed = 0

    [task first]
    kind = limit
    series = gen(0,1)
    expect = -1

Keys may repeat (values accumulate in order); ``#`` starts a comment line.
Every value is validated by the parser of its kind before anything runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MotzetaError, ParseError, ValidationError

HEADER = "motzeta 1"
KINDS = ("zeta", "nearby", "volume_series", "am_sum", "euler", "limit", "hadamard",
         "arc_count", "count_set", "check_termwise", "check_identity", "property")

_TASK = re.compile(r"^\[task\s+([A-Za-z0-9_.\-]+)\s*\]$")
_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)?$")


@dataclass
class Task:
    name: str
    kind: str
    fields: list = field(default_factory=list)      # (key, value, line)
    line: int = 0
    payload: dict = field(default_factory=dict)

    def values(self, key):
        return [v for k, v, _ in self.fields if k == key]

    def get(self, key, default=None):
        vals = self.values(key)
        return vals[-1] if vals else default

    def line_of(self, key):
        return next((ln for k, _, ln in self.fields if k == key), self.line)


@dataclass
class TaskFile:
    tasks: list = field(default_factory=list)
    seed: int = 0

    def render(self):
        lines = [HEADER, f"seed = {self.seed}"]
        for t in self.tasks:
            lines.append("")
            lines.append(f"[task {t.name}]")
            lines.append(f"kind = {t.kind}")
            for k, v, _ in t.fields:
                lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"

    def comparable(self):
        return (self.seed, [(t.name, t.kind, [(k, v) for k, v, _ in t.fields])
                            for t in self.tasks])

    def __eq__(self, other):
        return isinstance(other, TaskFile) and self.comparable() == other.comparable()


def parse_taskfile(text):
    """Parse and validate; raises ParseError or ValidationError (all errors in ``.errors``)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"task file is not UTF-8: {exc}") from None
    tf = _parse_lines(text)
    errors = []
    for t in tf.tasks:
        try:
            t.payload = validate_task(t)
        except ValidationError as exc:
            errors.append(exc)
    if errors:
        first = errors[0]
        first.errors = errors
        raise first
    return tf


def _parse_lines(text):
    tf = TaskFile()
    seen_header = False
    current = None
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip())
        if not seen_header:
            if line != HEADER:
                raise ParseError(f"expected header {HEADER!r}", lineno, indent + 1)
            seen_header = True
            continue
        if line.startswith("["):
            m = _TASK.match(line)
            if not m:
                raise ParseError("malformed task header, expected [task NAME]", lineno, indent + 1)
            name = m.group(1)
            if name in names:
                raise ParseError(f"duplicate task name {name!r}", lineno, indent + 1)
            names.add(name)
            current = Task(name, "", line=lineno)
            tf.tasks.append(current)
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, indent + 1)
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not _KEY.match(key):
            raise ParseError(f"invalid key {key!r}", lineno, indent + 1)
        if not value:
            col = indent + raw.strip().index("=") + 2
            raise ParseError(f"missing value for {key!r}", lineno, col)
        if current is None:
            if key != "seed":
                raise ParseError(f"unknown global setting {key!r}", lineno, indent + 1)
            try:
                tf.seed = int(value)
            except ValueError:
                col = indent + raw.strip().index("=") + 2
                raise ParseError("seed must be an integer", lineno, col) from None
            continue
        if key == "kind":
            if current.kind:
                raise ParseError("kind given twice", lineno, indent + 1)
            current.kind = value
            continue
        current.fields.append((key, value, lineno))
    if not seen_header:
        raise ParseError(f"expected header {HEADER!r}", 1, 1)
    for t in tf.tasks:
        if not t.kind:
            raise ParseError(f"task {t.name!r} has no kind", t.line, 1)
        if t.kind not in KINDS:
            raise ParseError(f"unknown kind {t.kind!r}", t.line, 1)
    return tf


# ------------------------------------------------------------- validation

def _fail(task, key, message):
    return ValidationError(f"{message} (line {task.line_of(key)})", task.name, key)


def _int(text):
    return int(text.strip())


def _int_list(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _rational(text):
    from .gamma import parse_rational

    return parse_rational(text)


def _split_top(text, sep=","):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _basis(text):
    from .series import parse_series

    out = []
    for item in _split_top(text):
        s = parse_series(item)
        if s.poly or len(s.rational) != 1:
            raise ValueError(f"basis element {item!r} is not a generator product")
        (key, coeff), = s.rational.items()
        if coeff != 1:
            raise ValueError(f"basis element {item!r} has a coefficient")
        out.append(key[0] if len(key) == 1 else key)
    return tuple(out)


def _prime(text):
    from .arcs import _is_prime

    q = int(text)
    if not _is_prime(q) or q > 7:
        raise ValueError(f"qf = {q} must be a prime <= 7")
    return q


def _target(text):
    from .arcs import Target

    parts = text.split()
    if parts[0] in ("exact_tm", "rv_t") and len(parts) == 1:
        return Target(parts[0])
    if parts[0] == "ord_window" and len(parts) == 3:
        return Target("ord_window", int(parts[1]), int(parts[2]))
    raise ValueError(f"unknown target {text!r}")


def _component(text):
    from .nearby import Component

    n, alpha = _int_list(text)
    return Component(n, alpha)


def _subset_value(text, value_parser):
    if ":" not in text:
        raise ValueError("expected 'i, j : value'")
    left, right = text.split(":", 1)
    return frozenset(_int_list(left)), value_parser(right.strip())


def _cone(text):
    from .gamma import ConePiece

    parts = [p.strip() for p in text.split(";")]
    if len(parts) < 2:
        raise ValueError("cone needs a vertex and at least one ray")
    vertex = tuple(_rational(x) for x in parts[0].split(","))
    rays, open_rays = [], []
    for j, p in enumerate(parts[1:]):
        if p.startswith("open "):
            open_rays.append(j)
            p = p[5:]
        ray = _int_list(p)
        if len(ray) != len(vertex):
            raise ValueError("ray and vertex lengths differ")
        rays.append(ray)
    return ConePiece(vertex, tuple(rays), tuple(open_rays))


def _motive(text):
    from .gring import parse_motive

    return parse_motive(text)


def _series(text):
    from .series import parse_series

    return parse_series(text)


def _predicate(text):
    from .arcs import parse_predicate

    return parse_predicate(text)


def _bases(text):
    from .arcs import BASES

    out = tuple(x.strip() for x in text.split(","))
    for b in out:
        if b not in BASES:
            raise ValueError(f"unknown base {b!r}")
    return out


# field -> (parser, required, repeated); "*" prefixes match dotted piece keys
ARC_FIELDS = {"f": (str, True, False), "vars": (str, False, False), "m": (_int, True, False),
              "trunc": (_int, True, False), "qf": (_prime, True, False),
              "base": (_bases, False, False), "origin": (_int_list, False, False),
              "target": (_target, False, False), "method": (str, False, False)}
RES_FIELDS = {"component": (_component, True, True),
              "stratum": (lambda t: _subset_value(t, _motive), False, True),
              "tag": (lambda t: _subset_value(t, _int), False, True),
              "reldim": (_int, True, False)}
IDENT_FIELDS = {"f": (str, True, False), "vars": (str, False, False),
                "blocks": (_int_list, True, False), "levels": (_int_list, True, False),
                "fields": (lambda t: tuple(_prime(x) for x in t.split(",")), True, False),
                "method": (str, False, False)}

SCHEMA = {
    "zeta": {"f": (str, True, False), "vars": (str, False, False), "qf": (_prime, True, False),
             "levels": (_int_list, True, False), "base": (_bases, False, False),
             "origin": (_int_list, False, False), "basis": (_basis, False, False)},
    "nearby": dict(RES_FIELDS, q=(_int, False, True)),
    "volume_series": dict(RES_FIELDS, q=(_int, False, True),
                          coefficients=(_int, False, False)),
    "am_sum": {"dim": (_int, True, False), "m": (_int, True, False),
               "constraint": (str, False, True), "cone": (_cone, False, True),
               "weight": (lambda t: tuple(_rational(x) for x in t.split(",")), False, False),
               "weight_offset": (_rational, False, False), "q": (_int, False, True)},
    "euler": {"dim": (_int, True, False), "constraint": (str, False, True),
              "*.constraint": (str, False, True), "*.value": (_motive, False, False)},
    "limit": {"series": (_series, True, False)},
    "hadamard": {"a": (_series, True, False), "b": (_series, True, False),
                 "coefficients": (_int, False, False)},
    "arc_count": ARC_FIELDS,
    "count_set": dict(ARC_FIELDS, blocks=(_int_list, True, False),
                      predicate=(_predicate, False, False)),
    "check_termwise": IDENT_FIELDS,
    "check_identity": dict(IDENT_FIELDS, basis=(_basis, False, False),
                           rhs_basis=(_basis, False, False),
                           component=(_component, False, True),
                           stratum=(lambda t: _subset_value(t, _motive), False, True),
                           reldim=(_int, False, False)),
    "property": {"check": (str, True, False), "trials": (_int, False, False)},
}

COMMON = {"expect": (str, False, False), "note": (str, False, False)}

PROPERTY_CHECKS = ("limit_axioms", "annulus", "hadamard", "limit_consistency", "xk_arcs",
                   "am_chi", "ring_axioms")


def _schema_entry(kind, key):
    schema = SCHEMA[kind]
    if key in schema:
        return schema[key]
    if key in COMMON:
        return COMMON[key]
    if "." in key:
        star = "*." + key.split(".", 1)[1]
        if star in schema:
            return schema[star]
    return None


def validate_task(task):
    """Parse every field of ``task``; returns the payload dict."""
    payload = {}
    for key, value, _ in task.fields:
        entry = _schema_entry(task.kind, key)
        if entry is None:
            raise _fail(task, key, f"unknown field for kind {task.kind}")
        parser, _, repeated = entry
        try:
            parsed = parser(value)
        except (MotzetaError, ValueError, ZeroDivisionError, TypeError) as exc:
            raise _fail(task, key, f"invalid value {value!r}: {exc}") from None
        if repeated:
            payload.setdefault(key, []).append(parsed)
        else:
            if key in payload:
                raise _fail(task, key, "field given more than once")
            payload[key] = parsed
    for key, (_, required, _) in SCHEMA[task.kind].items():
        if required and key not in payload:
            raise ValidationError(f"missing required field (task at line {task.line})",
                                  task.name, key)
    _validate_kind(task, payload)
    return payload


def _validate_kind(task, payload):
    from .arcs import ArcTask, SetSpec, Target, parse_polynomial, weight_check
    from .gamma import parse_constraint

    kind = task.kind

    def poly(key="f"):
        names = None
        if "vars" in payload:
            names = [v.strip() for v in payload["vars"].split(",")]
        try:
            return parse_polynomial(payload[key], names)
        except MotzetaError as exc:
            raise _fail(task, key, f"bad polynomial: {exc}") from None

    if kind in ("arc_count", "count_set"):
        f = poly()
        payload["poly"] = f
        try:
            payload["task"] = ArcTask(f, payload["m"], payload["trunc"], payload["qf"],
                                      payload.get("base"), payload.get("origin"),
                                      payload.get("target", Target()))
            if kind == "count_set":
                payload["spec"] = SetSpec(payload["task"], payload["blocks"],
                                          payload.get("predicate", ("true",)))
        except ValueError as exc:
            raise _fail(task, "f", str(exc)) from None
        if payload.get("method", "recursive") not in ("recursive", "enumerate"):
            raise _fail(task, "method", "method must be recursive or enumerate")
    if kind == "zeta":
        f = poly()
        payload["poly"] = f
        for key in ("base", "origin"):
            if key in payload and len(payload[key]) != f.dim:
                raise _fail(task, key, "needs one entry per variable")
    if kind in ("check_termwise", "check_identity"):
        f = poly()
        payload["poly"] = f
        blocks = payload["blocks"]
        if len(blocks) not in (2, 3) or sum(blocks) != f.dim:
            raise _fail(task, "blocks", "blocks must partition the variables")
        if not weight_check(f, blocks):
            raise _fail(task, "f", "polynomial fails the weight (1, -1, 0) check")
        if any(m < 1 for m in payload["levels"]):
            raise _fail(task, "levels", "levels must be positive")
        if payload.get("method", "enumerate") not in ("recursive", "enumerate"):
            raise _fail(task, "method", "method must be recursive or enumerate")
    if kind in ("am_sum", "euler"):
        dim = payload["dim"]
        keys = [k for k, _, _ in task.fields if k == "constraint" or k.endswith(".constraint")]
        for key in dict.fromkeys(keys):
            try:
                payload[key] = [parse_constraint(c, dim) for c in payload[key]]
            except MotzetaError as exc:
                raise _fail(task, key, str(exc)) from None
        for cone in payload.get("cone", []):
            if cone.dim != dim:
                raise _fail(task, "cone", "cone dimension differs from dim")
        if kind == "am_sum" and "cone" in payload and "constraint" in payload:
            raise _fail(task, "cone", "give either constraints or cones, not both")
        if kind == "am_sum" and payload["m"] < 1:
            raise _fail(task, "m", "m must be positive")
        if "weight" in payload and len(payload["weight"]) != dim:
            raise _fail(task, "weight", "weight needs one coefficient per coordinate")
    if kind == "property":
        if payload["check"] not in PROPERTY_CHECKS:
            raise _fail(task, "check", f"unknown check; choose from {', '.join(PROPERTY_CHECKS)}")
    if kind in ("nearby", "volume_series") or (kind == "check_identity" and "component" in payload):
        from .nearby import ResolutionDatum

        if "reldim" not in payload:
            raise ValidationError("missing required field", task.name, "reldim")
        try:
            payload["resolution"] = ResolutionDatum(tuple(payload["component"]),
                                                    dict(payload.get("stratum", [])),
                                                    payload["reldim"],
                                                    dict(payload.get("tag", [])))
        except ValueError as exc:
            raise _fail(task, "stratum", str(exc)) from None
