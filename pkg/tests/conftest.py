from __future__ import annotations

import pytest

from harmonia.catalog import make_space

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def h2():
    return make_space("real_hyperbolic", 2)


@pytest.fixture(scope="session")
def h3():
    return make_space("real_hyperbolic", 3)


@pytest.fixture(scope="session")
def ch4():
    return make_space("complex_hyperbolic", 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
