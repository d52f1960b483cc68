import pytest

from txcap import (
    ChannelSpec,
    ConstantFading,
    FixedDistance,
    LognormalFading,
    NearestReceiver,
    NetworkSpec,
    RayleighFading,
)

# Canonical operating point used throughout: alpha=4, beta=3, lambda=0.01,
# r = 5 m for the fixed-separation models, lambda' = lambda for the
# nearest-receiver model.
ALPHA = 4.0
BETA = 3.0
DENSITY = 0.01
R = 5.0


@pytest.fixture(scope="session")
def lognormal_channel() -> ChannelSpec:
    return ChannelSpec(
        alpha=ALPHA, beta=BETA, fading=LognormalFading.from_db(6.0), distance=FixedDistance(R)
    )


@pytest.fixture(scope="session")
def rayleigh_channel() -> ChannelSpec:
    return ChannelSpec(
        alpha=ALPHA, beta=BETA, fading=RayleighFading(), distance=FixedDistance(R)
    )


@pytest.fixture(scope="session")
def nearest_channel() -> ChannelSpec:
    return ChannelSpec(
        alpha=ALPHA, beta=BETA, fading=ConstantFading(1.0), distance=NearestReceiver(DENSITY)
    )


@pytest.fixture(scope="session")
def network() -> NetworkSpec:
    return NetworkSpec(DENSITY)
