import numpy as np
import pytest

from bandflow.coefficients import ConstantPair, RationalBumpPair, TabulatedPair
from bandflow.flow import Grid
from bandflow.waves import solve_cbar, stationary_profile


@pytest.fixture(scope="session")
def constant_pair():
    """a = 1, b = -1/2: the zero-speed profile is a circle of radius 2"""
    return ConstantPair(alpha=1.0, beta=0.5)


@pytest.fixture(scope="session")
def grim_reaper_pair():
    """a = 1, b = 0: c_bar = pi/2 and Phi(x) = -(2/pi) ln cos(pi x / 2)"""
    return ConstantPair(alpha=1.0, beta=0.0, degenerate=True)


@pytest.fixture(scope="session")
def bump_pair():
    return RationalBumpPair(alpha=1.0, eps=0.3, beta=0.5, delta=0.1)


@pytest.fixture(scope="session")
def skewed_pair():
    """tabulated pair that is not even in the angle"""
    omega = np.linspace(-np.pi / 2, np.pi / 2, 129)
    return TabulatedPair(omega, 1.0 + 0.1 * np.sin(omega), -0.5 - 0.05 * np.sin(omega))


@pytest.fixture(scope="session")
def constant_wave(constant_pair):
    return solve_cbar(constant_pair)


@pytest.fixture(scope="session")
def constant_stationary(constant_pair):
    return stationary_profile(constant_pair)


@pytest.fixture(scope="session")
def grid128():
    return Grid.uniform(128)
