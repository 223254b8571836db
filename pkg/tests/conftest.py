import pytest

from optsearch import (
    CircularNormal,
    CornerExponential,
    Domain,
    Exponential,
    Scenario,
    SpatialExponential,
)


@pytest.fixture(scope="session")
def ex1():
    """Quadrant exponential prior, unit-rate detection, W=1, v=5."""
    return Scenario(CornerExponential(), Exponential(1.0), 1.0, 5.0, Domain(0, 15, 0, 15, 512, 512))


@pytest.fixture(scope="session")
def cn():
    return Scenario(CircularNormal(1.0), Exponential(1.0), 1.0, 5.0, Domain(-6, 6, -6, 6, 512, 512))


@pytest.fixture(scope="session")
def spatial():
    return Scenario(CornerExponential(), SpatialExponential("norm_sq"), 1.0, 5.0, Domain(0, 15, 0, 15, 512, 512))


@pytest.fixture(scope="session")
def ex1_coarse():
    return Scenario(CornerExponential(), Exponential(1.0), 1.0, 5.0, Domain(0, 12, 0, 12, 32, 32))
