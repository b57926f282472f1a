import numpy as np
import pytest
from hypothesis import strategies as st

from dit.params import SystemParams, paper_defaults


@pytest.fixture
def paper():
    return paper_defaults()


def log_uniform(lo, hi):
    return st.floats(np.log10(lo), np.log10(hi)).map(lambda e: float(10.0 ** e))


@st.composite
def passive_params(draw, delta_zero=True):
    """Valid parameter sets spanning many decades of every rate."""
    gamma = draw(log_uniform(1e-3, 1e3))
    kappa = gamma * draw(st.floats(0.0, 3.0))
    g1 = draw(st.one_of(st.just(0.0), log_uniform(1e-4, 1e2)))
    tau2 = draw(log_uniform(1e-5, 1e1))
    delta = 0.0 if delta_zero else draw(st.floats(-10.0, 10.0))
    return SystemParams(gamma=gamma, kappa=kappa, g1=g1, tau2=tau2, delta=delta)


def random_param_arrays(n, seed=0):
    """Seeded batch of valid parameters with delta = 0, as arrays."""
    rng = np.random.default_rng(seed)
    gamma = 10 ** rng.uniform(-3, 3, n)
    kappa = gamma * rng.uniform(0, 3, n)
    g1 = 10 ** rng.uniform(-4, 2, n)
    g1[rng.random(n) < 0.05] = 0.0
    tau2 = 10 ** rng.uniform(-5, 1, n)
    return gamma, kappa, g1, tau2
