import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from bksbench import catalog  # noqa: E402

GOLDEN = pathlib.Path(__file__).parent / "golden"

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def ceg18():
    return catalog.ceg18().ray_set


@pytest.fixture(scope="session")
def peres24():
    return catalog.peres24().ray_set


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome.upper()
    elif "test_acceptance.py" in report.nodeid and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = "ERROR"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        mark = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
