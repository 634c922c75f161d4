import numpy as np
import pytest

from spectral_cmc.rotational import genus0, genus1


@pytest.fixture(scope="session")
def rot0():
    return genus0(1.0)


@pytest.fixture(scope="session")
def rot1():
    return genus1(1.0, 3.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260824)
