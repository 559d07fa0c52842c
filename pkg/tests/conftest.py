import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wqp.params import LogParams

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def complex_in(re, im):
    return st.builds(complex, st.floats(*re), st.floats(*im))


# default sampling box, as hypothesis strategies
zetas = complex_in((-0.2, 0.2), (0.2, 0.6))
taus = complex_in((-0.2, 0.2), (0.6, 1.2))
xis = st.builds(
    lambda s, r, i: complex(s * r, i),
    st.sampled_from([-1.0, 1.0]),
    st.floats(0.05, 0.3),
    st.floats(-0.1, 0.1),
)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def base_params():
    return LogParams(2, 0.05 + 0.3j, 0.1 + 0.9j)


def untestable(fn, *args, **kwargs):
    """Call ``fn``; discard the hypothesis example when the library refuses."""
    from hypothesis import reject

    from wqp.errors import Refusal

    try:
        return fn(*args, **kwargs)
    except Refusal:
        reject()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "LINES", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[k])
