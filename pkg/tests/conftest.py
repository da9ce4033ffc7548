import pytest

from finitetrap import TrapParams

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line: report(number, passed, text)."""

    def _record(number, passed, text):
        ACCEPTANCE_LINES.append((number, passed, text))

    return _record


@pytest.fixture(params=[7.0, 26.0, 30.0, 45.0, 75.0], ids=lambda N: f"N={N:g}")
def trap(request):
    return TrapParams(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, text in sorted(ACCEPTANCE_LINES, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {text}")
