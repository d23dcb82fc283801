import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    n, title = marker.args
    detail = getattr(item, "acceptance_detail", "")
    _CRITERIA[n] = (title, "PASS" if report.passed else "FAIL", detail)


@pytest.fixture
def detail(request):
    """Callable storing a one-line detail string for the acceptance summary."""

    def store(text):
        request.node.acceptance_detail = text

    return store


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[n]
        line = f"criterion {n} [{status}] {title}"
        terminalreporter.write_line(line + (f": {detail}" if detail else ""))
