from __future__ import annotations

import os
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from largen4.conformal import structure_table

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

N = 4


@pytest.fixture(scope="session")
def centreless():
    return structure_table(None, N)


@pytest.fixture(scope="session")
def table_half():
    return structure_table(Fraction(1, 2), N)


@pytest.fixture(scope="session")
def table_third():
    return structure_table(Fraction(1, 3), N)


# ---------------------------------------------------------------------------
# acceptance report: one PASS/FAIL line per criterion in the terminal summary

_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    prev = _CRITERIA.get(number, (title, True))[1]
    _CRITERIA[number] = (title, prev and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
