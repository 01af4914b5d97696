import numpy as np
import pytest

from ssx import symmetric_pair as sp

# Filled by tests/test_acceptance.py; printed after the run.
ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture(scope="session")
def hyp33():
    return sp.hyperboloid_pair(3, 3)


@pytest.fixture(scope="session")
def so22_rank2():
    return sp.build_so_pair(2, 2, (-1, 1, -1, 1))


@pytest.fixture(scope="session")
def so31_rank2():
    return sp.build_so_pair(3, 1, (-1, 1, -1, 1))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
