import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from reluparam import ShallowNet, param_count, unflatten  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@st.composite
def nets(draw, max_d=3, max_h=5, bound=5.0):
    d = draw(st.integers(1, max_d))
    h = draw(st.integers(1, max_h))
    vals = draw(st.lists(st.floats(-bound, bound, allow_nan=False, allow_infinity=False),
                         min_size=param_count(d, h), max_size=param_count(d, h)))
    return unflatten(np.array(vals), d, h)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def identity_net():
    return ShallowNet([[1.0]], [0.0], [1.0], 0.0)


def constant_net(c=7.0, d=1, h=1):
    return ShallowNet(np.zeros((h, d)), np.zeros(h), np.zeros(h), c)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
