import numpy as np
import pytest

from zetalab import zeta


@pytest.fixture(scope="session")
def zeros_300():
    return zeta.find_zeros(300.0)


@pytest.fixture(scope="session")
def zeros_1000():
    return zeta.find_zeros(1000.0)


@pytest.fixture(scope="session")
def zeros_5000():
    return zeta.find_zeros(5000.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)
