from fractions import Fraction

import pytest
from hypothesis import strategies as st

from weakkam import validate_space


@pytest.fixture
def I1():
    return validate_space(None, [[5]])


@pytest.fixture
def I2():
    return validate_space(None, [[1, 0], [0, 2]])


@pytest.fixture
def I3():
    return validate_space(None, [[0, 2], [3, 1]])


def canonical():
    return {
        "I1": validate_space(None, [[5]]),
        "I2": validate_space(None, [[1, 0], [0, 2]]),
        "I3": validate_space(None, [[0, 2], [3, 1]]),
    }


rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 6))


@st.composite
def spaces(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    cost = draw(st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n))
    return validate_space(None, cost)


@st.composite
def space_and_vectors(draw, count=2, max_n=4):
    space = draw(spaces(max_n))
    vecs = [draw(st.lists(rationals, min_size=space.n, max_size=space.n)) for _ in range(count)]
    return (space, *vecs)

lambdas = st.builds(lambda p, q: Fraction(p, p + q), st.integers(1, 30), st.integers(1, 30))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                name = rep.nodeid.split("::test_criterion_")[1]
                number, _, label = name.partition("_")
                lines.append((int(number), f"criterion {int(number):2d}: {outcome.upper()[:4]:4s}  {label.replace('_', ' ')}"))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
