import numpy as np
import pytest

from hydrolim.spectral import Grid


@pytest.fixture(scope="session")
def small_grid():
    return Grid(nh=8, nz=4)


@pytest.fixture(scope="session")
def med_grid():
    return Grid(nh=16, nz=8)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
