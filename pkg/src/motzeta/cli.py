"""Command line: ``motzeta run`` and ``motzeta check``."""

import sys

import click

from .arcs import DEFAULT_BUDGET
from .errors import ParseError, ValidationError
from .report import render
from .runner import run
from .taskfile import parse_taskfile


def _load(path):
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_taskfile(data)
    except (ParseError, ValidationError) as exc:
        for err in getattr(exc, "errors", [exc]):
            click.echo(f"{path}: {err.code}: {err}", err=True)
        sys.exit(2)


@click.group()
def main():
    """Exact motivic zeta functions, nearby cycles and arc counts."""


@main.command("run")
@click.argument("taskfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text")
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True,
              help="Node budget for arc counting.")
@click.option("--seed", type=int, default=None, help="Override the task file seed.")
def run_cmd(taskfile, fmt, budget, seed):
    """Run every task in TASKFILE and print the report."""
    tf = _load(taskfile)
    report = run(tf, budget=budget, seed=seed)
    click.echo(render(report, fmt), nl=False)
    sys.exit(report.exit_code)


@main.command("check")
@click.argument("taskfile", type=click.Path(exists=True, dir_okay=False))
def check_cmd(taskfile):
    """Parse and validate TASKFILE without running it."""
    tf = _load(taskfile)
    click.echo(f"{taskfile}: {len(tf.tasks)} task(s) valid")


if __name__ == "__main__":
    main()
