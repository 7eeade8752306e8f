"""Hypothesis strategies producing seeded random operators."""

import numpy as np
from hypothesis import strategies as st

from qrenyi.sampling import random_hermitian, random_psd, random_state

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=4)


@st.composite
def states(draw, dim=None, rank=None):
    d = draw(dims) if dim is None else dim
    return random_state(d, rank, np.random.default_rng(draw(seeds)))


@st.composite
def state_pairs(draw, dim=None):
    d = draw(dims) if dim is None else dim
    rng = np.random.default_rng(draw(seeds))
    return random_state(d, rng=rng), random_state(d, rng=rng)


@st.composite
def hermitians(draw, dim=None):
    d = draw(dims) if dim is None else dim
    return random_hermitian(d, np.random.default_rng(draw(seeds)))


@st.composite
def psds(draw, dim=None):
    d = draw(dims) if dim is None else dim
    return random_psd(d, np.random.default_rng(draw(seeds)))
