import numpy as np
import pytest

from tiered_deploy.experiment import WSN_DENSITY, WSN_REGION
from tiered_deploy.spatial import Region, Uniform, build_grid


@pytest.fixture(scope="session")
def unit_interval_grid():
    return build_grid(Region.interval(0.0, 1.0), Uniform(), 4096)


@pytest.fixture(scope="session")
def centered_interval_grid():
    return build_grid(Region.interval(-0.5, 0.5), Uniform(), 4096)


@pytest.fixture(scope="session")
def wsn_grid_coarse():
    return build_grid(WSN_REGION, WSN_DENSITY, 48)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
