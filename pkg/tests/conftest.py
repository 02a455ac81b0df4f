import pytest
from hypothesis import settings
from hypothesis import strategies as st

from gmforms.scalars import char0, finite, padic

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    number = int(name.split("_")[2])
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "PASS" if report.outcome == "passed" else "FAIL"
        _ACCEPTANCE[number] = (name, outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        name, outcome = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {outcome}  {name}")


FIELDS = {
    "padic2": padic(2, 1),
    "padic3": padic(3, 1),
    "padic3k2": padic(3, 2),
    "padic5": padic(5, 1),
    "char0": char0(1),
    "char0k2": char0(2),
    "fq2": finite(2, 1),
    "fq3": finite(3, 1),
}


@pytest.fixture(params=sorted(FIELDS))
def field(request):
    return FIELDS[request.param]


seeds = st.integers(min_value=0, max_value=2**32 - 1)
