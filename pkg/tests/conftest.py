import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

ACCEPTANCE_LINES = []


def compositions(min_D=2, max_D=6, lo=0.01):
    """Hypothesis strategy for strictly positive compositions."""
    return st.integers(min_D, max_D).flatmap(
        lambda D: arrays(float, D, elements=st.floats(lo, 1.0))
    ).filter(lambda v: v.sum() > 0).map(lambda v: v / v.sum())


def composition_pairs(min_D=2, max_D=6, lo=0.01):
    return st.integers(min_D, max_D).flatmap(
        lambda D: st.tuples(
            arrays(float, D, elements=st.floats(lo, 1.0)),
            arrays(float, D, elements=st.floats(lo, 1.0)),
        )
    ).map(lambda p: (p[0] / p[0].sum(), p[1] / p[1].sum()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def dirichlet_pair(rng):
    X = rng.dirichlet([3, 3, 3], size=20)
    Y = rng.dirichlet([2, 3, 5], size=15)
    return X, Y


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
