import numpy as np
import pytest
from hypothesis import strategies as st

from contact_bch import ChaElement
from contact_bch.selftest import random_element

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rand():
    """``rand(rng, n, lo, hi, c_range)`` -> random ChaElement."""
    return random_element


def elements(n=1, bound=3.0, c_bound=None):
    """Hypothesis strategy for ChaElement with bounded components."""
    comp = st.floats(-bound, bound, allow_nan=False, allow_infinity=False)
    cb = bound if c_bound is None else c_bound
    return st.builds(
        ChaElement,
        comp,
        st.lists(comp, min_size=n, max_size=n),
        st.lists(comp, min_size=n, max_size=n),
        st.floats(-cb, cb, allow_nan=False, allow_infinity=False),
    )


def assert_elem_close(actual, expected, atol):
    diff = (actual - expected).norm()
    assert diff <= atol, f"|{actual} - {expected}| = {diff:.3e} > {atol:.1e}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
