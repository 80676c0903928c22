import pytest

from sefcc.enumeration import SearchStrategy, _census
from sefcc.fcc import BooleanFunction, construct_max_sum, extend_to_full, optimal_fer_assignment
from sefcc.hamming import Word, distance3_graph, hamming_codebook

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def cb():
    return hamming_codebook()


@pytest.fixture(scope="session")
def graph():
    return distance3_graph()


@pytest.fixture(scope="session")
def hcmf():
    return BooleanFunction.hcmf()


@pytest.fixture(scope="session")
def c1():
    return extend_to_full(construct_max_sum())


@pytest.fixture(scope="session")
def c2():
    return extend_to_full(optimal_fer_assignment(Word(0b00, 2)))


@pytest.fixture(scope="session")
def census(graph):
    return _census(graph, SearchStrategy(), with_spectra=True)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def full_sweep_valid(graph):
    from sefcc.enumeration import valid_assignments

    return valid_assignments(graph, SearchStrategy("full_sweep"))
