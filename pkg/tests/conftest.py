import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jzlab.monoid import JElement

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def elements(draw, max_support=4, span=6, max_power=3, max_shift=4):
    idx = draw(st.lists(st.integers(-span, span), max_size=max_support, unique=True))
    exps = {m: draw(st.integers(1, max_power)) for m in idx}
    return JElement.from_map(exps, draw(st.integers(-max_shift, max_shift)))


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(test_acceptance.RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.lines()[0])
