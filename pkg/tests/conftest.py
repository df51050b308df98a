import sys

import pytest
from hypothesis import strategies as st

from ffquad import Polynomial


def P(text):
    return Polynomial.parse(text)


@pytest.fixture
def poly():
    return P


def polys(q, max_degree=8, monic=False):
    """Hypothesis strategy for polynomials over F_q."""
    coeffs = st.lists(st.integers(0, q - 1), min_size=0, max_size=max_degree + 1)
    if monic:
        return coeffs.map(lambda c: Polynomial(q, list(c) + [1]))
    return coeffs.map(lambda c: Polynomial(q, c))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
