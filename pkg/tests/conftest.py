import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from dimcheck import CORPUS
from dimcheck.dimcore import DimensionSystem

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def corpus() -> Path:
    return CORPUS


@pytest.fixture
def econ() -> DimensionSystem:
    return DimensionSystem(["T", "M", "QK", "QL", "QP", "U"])


_AC_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_ac"):
        return
    label = "AC" + str(int(name[7:9]))
    _AC_RESULTS[label] = ("PASS" if report.passed else "FAIL", name[10:].replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_AC_RESULTS, key=lambda s: int(s[2:])):
        status, what = _AC_RESULTS[label]
        terminalreporter.write_line(f"{label:<5} {status}  {what}")
