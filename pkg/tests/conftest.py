import numpy as np
import pytest

from focklaser.params import GainParams, RabiParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def headline_gain():
    """The reference operating point: eps = 1e-5, Gamma = 1e-3, kappa = 1e-8,
    pump ten times the emitter decay (all in units of omega)."""
    return GainParams(epsilon=1e-5, gamma=1e-3, r=1e-2, kappa=1e-8)


@pytest.fixture
def p_g10():
    return RabiParams(g=10.0)


@pytest.fixture
def p_g2():
    return RabiParams(g=2.0)


def brute_force_displacement(z: float, dim: int) -> np.ndarray:
    """exp(z(a' - a)) by scipy's matrix exponential; the Laguerre-free oracle."""
    from scipy.linalg import expm

    a = np.diag(np.sqrt(np.arange(1.0, dim)), 1)
    return expm(z * (a.T - a))
