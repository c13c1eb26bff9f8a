import pytest

from talbot.geometry import UcaLayout, make_grid


@pytest.fixture
def wide_grid():
    # lambda-normalized: R_t = 150, z = 1000
    return make_grid(1.0, 150.0, 1000.0)


@pytest.fixture
def wide_layout():
    return UcaLayout(150.0, 6)


@pytest.fixture
def prototype_grid():
    # millimeters: lambda = 10, R_t = 30, z = 75
    return make_grid(10.0, 30.0, 75.0)


@pytest.fixture
def prototype_layout():
    return UcaLayout(30.0, 6)
