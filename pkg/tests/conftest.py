from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ordercraft.generators import random_poset
from ordercraft.poset import antichain, build_poset, chain

settings.register_profile("ordercraft", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ordercraft")


@st.composite
def posets(draw, min_size: int = 0, max_size: int = 10):
    n = draw(st.integers(min_size, max_size))
    density = draw(st.sampled_from([0.0, 0.1, 0.3, 0.6, 0.9]))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_poset(np.random.default_rng(seed), n, density)


@pytest.fixture
def diamond():
    return build_poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


@pytest.fixture
def chain3():
    return build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.fixture
def a3():
    return antichain(3)


@pytest.fixture
def c3():
    return chain(3)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
