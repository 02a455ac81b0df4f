"""The twelve acceptance criteria at full scale, exact arithmetic throughout.

Run with ``pytest tests/test_acceptance.py`` (a summary line per criterion is
printed at the end) or directly with ``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import pathlib
import random
import subprocess
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from cli_cases import CASES  # noqa: E402
from gmforms.cli import run  # noqa: E402
from gmforms.scalars import char0, padic  # noqa: E402
from gmforms.selftest import (  # noqa: E402
    check_comodules,
    check_express,
    check_gradings,
    check_hopf,
    check_leibniz,
    check_membership,
    check_points,
    check_quotients,
    check_shortcut,
    check_springer_oracle,
    check_springer_polynomial,
    check_taylor,
    check_tower,
)
from gmforms.springer import WindowSpec, candidate_count  # noqa: E402

GOLDEN = pathlib.Path(__file__).parent / "golden"


def rng(tag):
    return random.Random(f"acceptance:{tag}")


def passes(result, at_least):
    count, fails = result
    assert fails == []
    assert count >= at_least


def test_criterion_01_leibniz():
    passes(check_leibniz(rng(1), 1000, [padic(2, 1), padic(3, 1), padic(5, 1)]), 1000)
    passes(check_leibniz(rng("1c"), 1000, [char0(1)]), 1000)


def test_criterion_02_taylor_and_express():
    passes(check_taylor(rng(2), 500), 500)
    passes(check_express(rng("2e"), 200), 200)


def test_criterion_03_membership():
    # 100 trials: 3 combinations and 1 perturbation each
    passes(check_membership(rng(3), 100), 100)


def test_criterion_04_hopf_axioms():
    passes(check_hopf(rng(4), 50, ks=(0, 1, 2, 3), ps=(2, 3)), 8 * 50)


def test_criterion_05_tower():
    passes(check_tower(rng(5), 200, kmax=3), 4 * 200)


def test_criterion_06_comodules():
    passes(check_comodules(rng(6), 50), 50)


def test_criterion_07_group_compatibility():
    passes(check_points(rng(7), 10, 100), 10 * 2 * 100)


def test_criterion_08_shortcut():
    passes(check_shortcut(rng(8), 200), 400)


def test_criterion_09_quotients():
    passes(check_quotients(rng(9), 20), 20)


def test_criterion_10_gradings():
    passes(check_gradings(rng(10), 100), 100)


ORACLE_GRID = [
    (degrees, k, a, q)
    for degrees in ((0,), (2,), (0, 1), (1, 2), (0, 2), (1, 0), (0, 0), (0, 1, 2), (0, 1, 3))
    for k in (1, 2, 3)
    for a in (0, 1, 2)
    for q in (2, 3, 5, 7)
    if candidate_count(WindowSpec(degrees, k, a, q)) <= 10**4
]


def test_criterion_11_springer():
    passes(check_springer_oracle(ORACLE_GRID), len(ORACLE_GRID))
    passes(check_springer_polynomial(((((0, 1), 1, 1), ((1, 2), 1, 1))), (2, 3, 5, 7)), 2)


def _cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run(argv)
    return code, buf.getvalue()


def test_criterion_12_determinism():
    argv = [sys.executable, "-m", "gmforms", "selftest", "--seed", "42"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.decode() == (GOLDEN / "selftest.json").read_text()
    for name, case in CASES.items():
        assert _cli(case)[1] == (GOLDEN / f"{name}.json").read_text(), name


if __name__ == "__main__":
    tests = sorted(name for name in globals() if name.startswith("test_criterion_"))
    failed = 0
    for name in tests:
        try:
            globals()[name]()
            outcome = "PASS"
        except Exception as exc:  # report and keep going
            outcome = f"FAIL ({type(exc).__name__})"
            failed += 1
        print(f"criterion {name.split('_')[2]} {outcome}  {name}", flush=True)
    sys.exit(1 if failed else 0)


pytestmark = pytest.mark.acceptance
