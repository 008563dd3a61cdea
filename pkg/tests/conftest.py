import sys
from pathlib import Path

import pytest

from hubbard_ucc import kernels
from hubbard_ucc.verification import clear_all_caches

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    """Run the test once per available kernel backend."""
    previous = kernels.backend_name()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def fresh_caches():
    clear_all_caches()
    yield
    clear_all_caches()


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        for marker in report.keywords:
            if marker.startswith("test_criterion_"):
                _criteria[marker] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        status = "PASS" if _criteria[name] == "passed" else "FAIL"
        number = name.split("_")[2]
        title = name.split("_", 3)[3].replace("_", " ")
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
