from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sharpmax.core import CyclicSignal, Signal

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def fractions(lo=-10, hi=10, max_den=4):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, max_den))


@st.composite
def signals(draw, max_len=8, lo=-10, hi=10, nonneg=False):
    start = draw(st.integers(-6, 6))
    vals = draw(st.lists(fractions(0 if nonneg else lo, hi), min_size=1, max_size=max_len))
    return Signal({start + i: v for i, v in enumerate(vals)})


@st.composite
def nonzero_signals(draw, max_len=8, hi=10):
    g = draw(signals(max_len=max_len, hi=hi, nonneg=True))
    if g.is_zero():
        g = Signal.delta(draw(st.integers(-3, 3)))
    return g


@st.composite
def cyclic_signals(draw, L_max=5, nonneg=True, weight=False):
    L = draw(st.integers(1, L_max))
    vals = draw(st.lists(fractions(0 if nonneg else -6, 6), min_size=L, max_size=L))
    w = draw(fractions(1, 4)) if weight else 1
    return CyclicSignal(vals, w)


@pytest.fixture
def delta():
    return Signal.delta(0)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
