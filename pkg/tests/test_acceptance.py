"""End-to-end acceptance criteria, each driven through a task file.

Run with ``pytest tests/test_acceptance.py -s`` to see the one-line verdicts.
"""

import subprocess
import sys
import time
from pathlib import Path

from motzeta.runner import run
from motzeta.taskfile import parse_taskfile

FIXTURES = sorted((Path(__file__).parent.parent / "fixtures").glob("*.mz"))


def run_text(text):
    start = time.perf_counter()
    report = run(parse_taskfile(text))
    return report, time.perf_counter() - start


def verdict(capsys, number, title, ok, seconds, limit):
    ok = ok and seconds < limit
    with capsys.disabled():
        print(f"\ncriterion {number} ({title}): {'PASS' if ok else 'FAIL'} "
              f"in {seconds:.2f}s (limit {limit}s)")
    return ok


def values(report, name):
    return dict(next(r for r in report.results if r.name == name).values)


def all_ok(report):
    return all(r.status == "ok" for r in report.results)


def test_1_limit_axioms(capsys):
    report, t = run_text("motzeta 1\nseed = 1\n[task c1]\nkind = property\n"
                         "check = limit_axioms\ntrials = 20\n")
    assert verdict(capsys, 1, "limit axioms", all_ok(report), t, 1)


def test_2_annulus(capsys):
    report, t = run_text("motzeta 1\n[task c2]\nkind = property\ncheck = annulus\n")
    v = values(report, "c2")
    ok = all_ok(report) and v["xtilde m=1"] == 2 and all(
        v[f"limit p={p} q={q}"] == 0 for p, q in ((1, 1), (1, 2), (3, 2), (5, 1)))
    assert verdict(capsys, 2, "annulus vanishing", ok, t, 1)


def test_3_hadamard(capsys):
    report, t = run_text("motzeta 1\nseed = 3\n[task c3]\nkind = property\n"
                         "check = hadamard\ntrials = 50\n")
    assert verdict(capsys, 3, "Hadamard", all_ok(report), t, 5)


def test_4_limit_consistency(capsys):
    report, t = run_text("motzeta 1\nseed = 4\n[task c4]\nkind = property\n"
                         "check = limit_consistency\ntrials = 100\n")
    assert verdict(capsys, 4, "limit consistency", all_ok(report), t, 5)


def test_5_xk_cross_validation(capsys):
    report, t = run_text("motzeta 1\n[task c5]\nkind = property\ncheck = xk_arcs\n")
    v = values(report, "c5")
    ok = all_ok(report) and all(v[f"k={k} q={q}"] for k, q in ((2, 5), (2, 7), (3, 7)))
    assert verdict(capsys, 5, "x^k cross-validation", ok, t, 60)


TERMWISE = """motzeta 1

[task xyz_q3]
kind = check_termwise
f = x*y + z^2
blocks = 1, 1, 1
levels = 1, 2
fields = 3

[task xyz_q5]
kind = check_termwise
f = x*y + z^2
blocks = 1, 1, 1
levels = 1
fields = 5

[task xy_q3]
kind = check_termwise
f = x*y
blocks = 1, 1, 0
levels = 1, 2
fields = 3

[task xy_q5]
kind = check_termwise
f = x*y
blocks = 1, 1, 0
levels = 1
fields = 5
"""


def test_6_termwise(capsys):
    report, t = run_text(TERMWISE)
    cells = values(report, "xyz_q3")
    ok = all_ok(report)
    ok &= cells["counts qf=3 m=1"][:3] == [18, 0, 18]
    ok &= cells["counts qf=3 m=2"][4:] == [6, 3 ** 3 + 3 ** 4 - 1]
    assert verdict(capsys, 6, "termwise identity checks", ok, t, 300)


IDENTITY = """motzeta 1

[task thm]
kind = check_identity
f = x*y + z^2
blocks = 1, 1, 1
levels = 1, 2, 3, 4, 5, 6, 7, 8
fields = 3
basis = gen(-1,1), gen(-3,2), gen(-1,1)*gen(-3,2)
rhs_basis = gen(-1,2)
"""


def test_7_specialized_identity(capsys):
    report, t = run_text(IDENTITY)
    v = values(report, "thm")
    ok = all_ok(report) and v["LHS qf=3"] == v["RHS qf=3"] == 6 and v["X1 limit qf=3"] == 0
    assert verdict(capsys, 7, "specialized identity", ok, t, 600)


def test_8_am_chi(capsys):
    report, t = run_text("motzeta 1\nseed = 8\n[task c8]\nkind = property\ncheck = am_chi\n")
    assert verdict(capsys, 8, "a_m and Euler characteristic", all_ok(report), t, 5)


def cli(*args):
    return subprocess.run([sys.executable, "-m", "motzeta.cli", *args],
                          capture_output=True, check=False).stdout


def test_9_determinism(capsys):
    start = time.perf_counter()
    ok = bool(FIXTURES)
    for path in FIXTURES:
        for fmt in ("text", "structured"):
            first = cli("run", "--format", fmt, str(path))
            ok &= bool(first) and first == cli("run", "--format", fmt, str(path))
        tf = parse_taskfile(path.read_bytes())
        ok &= parse_taskfile(tf.render()) == tf
    t = time.perf_counter() - start
    assert verdict(capsys, 9, "CLI determinism and round-trip", ok, t, float("inf"))
