from __future__ import annotations

import pytest

from elcgraphs.enumeration import Census

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def census():
    """One memoised census shared by every test that counts orbits."""
    return Census()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
