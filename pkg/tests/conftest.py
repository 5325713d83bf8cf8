import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FROZEN = json.loads((Path(__file__).parent / "data" / "frozen.json").read_text())


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


def q(text: str) -> Fraction:
    return Fraction(text)


_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE, key=lambda t: int(t[0].split("_")[2])):
        terminalreporter.write_line(f"{name}: {'PASS' if outcome == 'passed' else 'FAIL'}")
