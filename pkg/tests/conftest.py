"""Pytest configuration and shared fixtures."""
import pytest
import numpy as np

from src.zalcman.classu import identity, koebe
from src.zalcman.config import SamplerConfig
from src.zalcman.search import sample_functions

SAMPLE_ORDER = 32
SAMPLES_PER_DEGREE = 60


@pytest.fixture
def koebe_function():
    """Koebe function k(z) = z/(1-z)^2."""
    return koebe(0.0, order=SAMPLE_ORDER)


@pytest.fixture
def identity_function():
    """f(z) = z."""
    return identity(SAMPLE_ORDER)


@pytest.fixture
def rng():
    """Seeded generator for test data."""
    return np.random.default_rng(12345)


@pytest.fixture(scope='session')
def sample_batch():
    """Accepted random class-U functions of Schur degree 0 through 6."""
    functions = []
    for degree in range(7):
        config = SamplerConfig(degree=degree, seed=1000 + degree, order=SAMPLE_ORDER)
        functions.extend(sample_functions(config, SAMPLES_PER_DEGREE))
    return functions
