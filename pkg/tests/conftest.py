import pytest
from hypothesis import strategies as st

from fpcheck.words import Presentation

ACCEPTANCE_LINES: list = []


def words(max_gen=3, max_size=30):
    """Unreduced words over generators 1..max_gen."""
    letters = [x for g in range(1, max_gen + 1) for x in (g, -g)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(tuple)


@pytest.fixture
def a5():
    return Presentation.from_strings("a b", ["a^2", "b^3", "(a b)^5"])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
