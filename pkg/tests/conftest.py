import numpy as np
import pytest
from hypothesis import strategies as st

from evopt.core_types import SupportInterval

UNIT = SupportInterval(0.0, 1.0)


@st.composite
def supports(draw):
    a = draw(st.floats(-5, 5, allow_nan=False))
    w = draw(st.floats(0.2, 10, allow_nan=False))
    return SupportInterval(a, a + w)


@st.composite
def interior_points(draw, support, margin=0.05):
    t = draw(st.floats(margin, 1 - margin, allow_nan=False))
    return float(support.from_unit(t))


@st.composite
def problems(draw, margin=0.05):
    """(support, mu0, mu1) with both means margin-away from the ends."""
    s = draw(supports())
    mu0 = draw(interior_points(s, margin))
    mu1 = draw(interior_points(s, margin))
    return s, mu0, mu1


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
