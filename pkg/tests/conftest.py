import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sconverse import Channel, Distribution, bsc

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_channel(rng, k, m, sparse=0.0):
    W = rng.dirichlet(np.ones(m), size=k)
    if sparse:
        W = np.where(rng.random(W.shape) < sparse, 0.0, W)
        for row in W:
            if row.sum() == 0:
                row[rng.integers(m)] = 1.0
        W = W / W.sum(axis=1, keepdims=True)
    return Channel(W)


def random_input(rng, k):
    return Distribution(rng.dirichlet(np.ones(k)))


@st.composite
def prob_vectors(draw, size=None, zeros=True):
    m = size if size is not None else draw(st.integers(2, 5))
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=m, max_size=m))
    v = np.array(raw)
    if not zeros:
        v = v + 0.05
    if v.sum() <= 1e-6:
        v = np.ones(m)
    return v / v.sum()


@st.composite
def channels(draw, max_in=4, max_out=4):
    k = draw(st.integers(1, max_in))
    m = draw(st.integers(2, max_out))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    return random_channel(rng, k, m), random_input(rng, k)


@pytest.fixture
def bsc01():
    return bsc(0.1)


@pytest.fixture
def uniform2():
    return Distribution([0.5, 0.5])
