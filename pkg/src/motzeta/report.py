"""Run results and their deterministic text / JSON rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .gring import LaurentPoly, LocalizedMotive, render_motive
from .series import RationalSeries, render_series

REPORT_HEADER = "motzeta report 1"


@dataclass
class TaskResult:
    name: str
    kind: str
    status: str                      # ok | failed | error
    code: str = ""
    message: str = ""
    values: list = field(default_factory=list)     # (label, value)
    echo: list = field(default_factory=list)       # (key, raw value)

    @property
    def status_text(self):
        return f"error({self.code})" if self.status == "error" else self.status


@dataclass
class Report:
    results: list = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self):
        return all(r.status == "ok" for r in self.results)

    @property
    def exit_code(self):
        return 0 if self.ok else 1


def encode(value):
    """JSON-ready form: integers as decimal strings, rationals as {num, den}."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, (LaurentPoly, LocalizedMotive)):
        return {"motive": render_motive(value)}
    if isinstance(value, RationalSeries):
        out = {"series": render_series(value)}
        if value.q is not None:
            out["q"] = str(value.q)
        return out
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    return str(value)


def text_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, (LaurentPoly, LocalizedMotive)):
        return render_motive(value)
    if isinstance(value, RationalSeries):
        text = render_series(value)
        return text if value.q is None else f"{text}  [L = {value.q}]"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(text_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {text_value(v)}" for k, v in value.items()) + "}"
    return str(value)


def render(report, fmt="text"):
    if fmt == "structured":
        doc = {"format": REPORT_HEADER, "seed": str(report.seed), "tasks": [
            {"name": r.name, "kind": r.kind, "status": r.status_text,
             **({"message": r.message} if r.message else {}),
             "values": [{"label": k, "value": encode(v)} for k, v in r.values],
             "input": [{"key": k, "value": v} for k, v in r.echo]}
            for r in report.results]}
        if not report.results:
            doc = {"format": REPORT_HEADER, "seed": str(report.seed), "tasks": []}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [REPORT_HEADER]
    for r in report.results:
        lines.append("")
        lines.append(f"[{r.name}] {r.kind}: {r.status_text}")
        if r.message:
            lines.append(f"  message: {r.message}")
        for k, v in r.values:
            lines.append(f"  {k}: {text_value(v)}")
    if report.results:
        n_ok = sum(r.status == "ok" for r in report.results)
        lines.append("")
        lines.append(f"summary: {n_ok}/{len(report.results)} ok")
    return "\n".join(lines) + "\n"
