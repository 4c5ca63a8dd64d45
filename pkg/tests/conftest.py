import numpy as np
import pytest

from canonfactor import inverse_spectral, sinc_bump_weight, step_weight


@pytest.fixture(scope="session")
def bump_mu():
    return sinc_bump_weight(0.5, 1.0)


@pytest.fixture(scope="session")
def bump_ham(bump_mu):
    # cell width 1/16: the isometry check is resolution-limited and needs
    # roughly this to sit comfortably under its tolerance
    return inverse_spectral(bump_mu, 16.0, 256)


@pytest.fixture(scope="session")
def step_mu():
    return step_weight(2.0, 1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
