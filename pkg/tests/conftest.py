import random

import pytest
from hypothesis import strategies as st

from plausible.formula import FALSE, TRUE, And, Iff, Implies, Not, Or, Symbol

NAMES = ["a", "b", "c", "d", "e"]


def formulas(names=NAMES, max_leaves=12, consts=True):
    leaves = st.sampled_from([Symbol(n) for n in names])
    if consts:
        leaves = leaves | st.sampled_from([TRUE, FALSE])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(Not),
            st.tuples(st.sampled_from([And, Or, Implies, Iff]), kids, kids).map(
                lambda t: t[0](t[1], t[2])
            ),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
