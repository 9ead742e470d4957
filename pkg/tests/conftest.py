import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "src" / "padic_ground" / "configs"

_acceptance: dict[str, str] = {}


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid:
        if report.when == "call" or report.outcome != "passed":
            _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    from test_acceptance import TITLES
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[2])):
        num = int(name.split("_")[2])
        verdict = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(
            f"criterion {num:2d} [{verdict}] {TITLES[num]}")
