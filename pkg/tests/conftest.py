import pytest

from capillarity import CapillarityParams, coexistence, planar_profile


@pytest.fixture(scope="session")
def params09():
    return CapillarityParams(lam=1.0, T=0.9)


@pytest.fixture(scope="session")
def coex09():
    return coexistence(0.9)


@pytest.fixture(scope="session")
def flat09(params09):
    return planar_profile(params09)
