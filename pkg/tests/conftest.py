from __future__ import annotations

import re
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_outcomes: dict = {}


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    prev = _outcomes.get(n, ("pass", m.group(2), 0.0))
    failed = report.failed or prev[0] == "fail"
    elapsed = prev[2] + (report.duration if report.when == "call" else 0.0)
    _outcomes[n] = ("fail" if failed else "pass", m.group(2), elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 10):
        if n not in _outcomes:
            terminalreporter.write_line(f"criterion {n}: not run")
            continue
        status, name, elapsed = _outcomes[n]
        terminalreporter.write_line(
            f"criterion {n}: {status.upper()}  {name.replace('_', ' ')}  ({elapsed:.2f} s)")
