"""Shared test plumbing.

The acceptance suite records one human-readable PASS/FAIL line per
criterion; printing happens in the terminal-summary hook so the lines stay
visible under pytest's default output capture.
"""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record an acceptance line, then assert the criterion."""

    def record(criterion, ok, detail):
        line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    record.note = ACCEPTANCE_LINES.append
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
