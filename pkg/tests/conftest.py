import random

import pytest

from elp.formula import Universe

_CRITERIA = {}


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def uni3():
    return Universe(("a", "b", "c"), ("p", "q", "r"))


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _CRITERIA[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    from test_acceptance import TITLES
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[2])):
        num = int(name.split("_")[2])
        terminalreporter.write_line(f"criterion {num:2d}: {_CRITERIA[name]}  {TITLES[num]}")
