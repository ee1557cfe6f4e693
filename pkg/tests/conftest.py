import numpy as np
import pytest

from g2spectral.loop import random_killing_field
from g2spectral.spectral import discriminant_profile, spectral_coefficients


@pytest.fixture(scope="session")
def field0():
    return random_killing_field(0, 1)


@pytest.fixture(scope="session")
def field1():
    return random_killing_field(1, 1)


@pytest.fixture(scope="session")
def spectral1(field1):
    S = spectral_coefficients(field1)
    return S, discriminant_profile(S)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
