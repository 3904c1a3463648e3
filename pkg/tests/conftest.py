import itertools

import pytest

from spea2_runtime.bitstring import Bitstring
from spea2_runtime.problems import Individual

_genotypes = itertools.count()


def ind(*objectives):
    """An individual with the given objective vector and a fresh genotype."""
    return Individual(Bitstring(next(_genotypes) % 2**20, 20), tuple(objectives))


def pool_of(*vectors):
    return [ind(*v) for v in vectors]


@pytest.fixture
def abcd():
    # A=(3,0), B=(2,1), C=(1,1), D=(0,0)
    return pool_of((3, 0), (2, 1), (1, 1), (0, 0))


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
