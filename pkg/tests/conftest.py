from __future__ import annotations

import pytest

_REPORT: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance_report():
    """Criterion number -> one-line verdict, echoed in the terminal summary."""
    return _REPORT


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_REPORT):
        terminalreporter.write_line(_REPORT[k])
