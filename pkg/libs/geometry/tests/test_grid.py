import logging
import math
from math import isclose

import numpy as np
import pytest

from talbot.geometry import (
    FractalGrid,
    GridIndex,
    NonPositiveInput,
    SubWavelengthAperture,
    enumerate_centers,
    grid_center,
    grid_line_orders,
    make_grid,
    nearest_center,
    required_transmit_radius,
)


@pytest.fixture
def mm_grid():
    # 30 GHz prototype: lambda = 10 mm, R_t = 30 mm, z = 75 mm
    return make_grid(10.0, 30.0, 75.0)


@pytest.fixture(params=[(1.0, 150.0, 1000.0), (10.0, 30.0, 75.0)])
def grid(request):
    return make_grid(*request.param)


def _contains(centers, target, atol):
    return any(np.allclose(c, target, atol=atol) for _, c in centers)


class TestMakeGrid:
    def test_prototype_radii(self, mm_grid):
        assert abs(mm_grid.rr_bound - 9.62) < 0.01
        assert isclose(mm_grid.cell_radius, 2 * 10 * 75 / (3 * 30))
        assert abs(mm_grid.cell_radius - 16.67) < 0.01

    def test_sweep_cap(self):
        grid = make_grid(1.0, 150.0, 1000.0)
        assert abs(grid.rr_bound - 2.566) < 5e-4
        assert grid.rr_bound < 2.57

    def test_bound_ratio(self, grid):
        assert isclose(
            grid.rr_bound, math.sqrt(3) / 3 * grid.cell_radius, rel_tol=1e-15
        )
        assert isclose(
            grid.rr_bound,
            2 * math.sqrt(3) / 9 * grid.scale,
            rel_tol=1e-14,
        )

    def test_cell_radius_from_row_spacing(self, mm_grid):
        centers = dict(
            (idx, c) for idx, c in enumerate_centers(mm_grid, 0, 2)
        )
        spacing = centers[GridIndex(0, 2)][1] - centers[GridIndex(0, 0)][1]
        assert isclose(
            mm_grid.cell_radius, math.sqrt(3) / 3 * spacing, rel_tol=1e-12
        )

    @pytest.mark.parametrize(
        "args",
        [(0, 30, 75), (10, -30, 75), (10, 30, 0), (10, 30, float("nan"))],
    )
    def test_non_positive(self, args):
        with pytest.raises(NonPositiveInput):
            make_grid(*args)

    def test_minimum_radius(self, caplog):
        with pytest.raises(SubWavelengthAperture):
            make_grid(1.0, 0.5, 100.0)

        with caplog.at_level(logging.WARNING):
            make_grid(1.0, 2.0, 100.0)
        assert "below 3 wavelengths" in caplog.text

        caplog.clear()
        with caplog.at_level(logging.WARNING):
            make_grid(1.0, 3.0, 100.0)
        assert not caplog.text

    @pytest.mark.parametrize("factor", [0.5, 2.0, 7.0])
    def test_scaling(self, factor):
        base = make_grid(1.0, 150.0, 1000.0)

        longer = make_grid(1.0, 150.0, 1000.0 * factor)
        assert isclose(
            longer.cell_radius, factor * base.cell_radius, rel_tol=1e-12
        )

        wider = make_grid(1.0 * factor, 150.0, 1000.0)
        assert isclose(
            wider.cell_radius, factor * base.cell_radius, rel_tol=1e-12
        )

        bigger = make_grid(1.0, 150.0 * factor, 1000.0)
        assert isclose(
            bigger.cell_radius, base.cell_radius / factor, rel_tol=1e-12
        )
        assert isclose(bigger.rr_bound, base.rr_bound / factor, rel_tol=1e-12)


class TestCenters:
    def test_origin(self, grid):
        assert np.array_equal(
            grid_center(GridIndex(0, 0), grid), [0, 0, grid.distance]
        )

    def test_prototype_centers(self, mm_grid):
        center = grid_center(GridIndex(0, 2), mm_grid)
        np.testing.assert_allclose(center, [0, 28.87, 75], atol=0.01)

        center = grid_center(GridIndex(1, 1), mm_grid)
        np.testing.assert_allclose(center, [75, 14.43, 75], atol=0.01)

    def test_prototype_neighbors(self, mm_grid):
        centers = enumerate_centers(mm_grid, 1, 2)
        for sx in (-1, 1):
            for sy in (-1, 1):
                target = [sx * 25, sy * 14.43, 75]
                assert _contains(centers, target, 0.01)
        for sy in (-1, 1):
            assert _contains(centers, [0, sy * 28.87, 75], 0.01)

    def test_enumerate_single(self, grid):
        centers = enumerate_centers(grid, 0, 0)
        assert len(centers) == 1
        idx, center = centers[0]
        assert idx == GridIndex(0, 0)
        assert np.array_equal(center, [0, 0, grid.distance])

    @pytest.mark.parametrize("max_m,max_n", [(0, 3), (2, 0), (3, 4)])
    def test_enumerate_count_and_order(self, grid, max_m, max_n):
        centers = enumerate_centers(grid, max_m, max_n)
        assert len(centers) == (2 * max_m + 1) * (2 * max_n + 1)

        indices = [(idx.m, idx.n) for idx, _ in centers]
        assert indices == sorted(indices)
        assert enumerate_centers(grid, max_m, max_n)[-1][0] == GridIndex(
            max_m, max_n
        )

    def test_enumerate_negative_bounds(self, grid):
        with pytest.raises(NonPositiveInput):
            enumerate_centers(grid, -1, 0)

    def test_line_families(self, grid):
        scale = grid.scale
        for idx, (x, y, _) in enumerate_centers(grid, 4, 5):
            orders = grid_line_orders(x, y, grid)
            assert orders.shape == (5,)
            residual = np.abs(orders - np.round(orders)) * scale
            assert (residual < 1e-9 * scale).all(), idx

    def test_line_families_reject_off_lattice(self, grid):
        x, y, _ = grid_center(GridIndex(1, 1), grid)
        orders = grid_line_orders(x + grid.cell_radius / 3, y, grid)
        assert not np.allclose(orders, np.round(orders))

    def test_hexagonal_pitch(self, grid):
        centers = np.array([c[:2] for _, c in enumerate_centers(grid, 3, 3)])
        diffs = centers[:, None] - centers[None]
        distances = np.hypot(diffs[..., 0], diffs[..., 1])
        np.fill_diagonal(distances, np.inf)
        nearest = distances.min(axis=1)

        expected = math.sqrt(3) * grid.cell_radius
        np.testing.assert_allclose(nearest, expected, rtol=1e-12)

    def test_nearest_center(self, grid):
        for idx, (x, y, _) in enumerate_centers(grid, 2, 3):
            jitter = 0.4 * grid.cell_radius
            assert nearest_center(x + jitter, y, grid) == idx
            assert nearest_center(x, y - jitter, grid) == idx


class TestRequiredTransmitRadius:
    def test_prototype(self):
        radius = required_transmit_radius(10.0, 75.0, 2 * 10 * 75 / 90)
        assert isclose(radius, 30.0, rel_tol=1e-12)
        assert abs(required_transmit_radius(10.0, 75.0, 16.67) - 30) < 0.01

    def test_two_wavelength_config(self):
        radius = required_transmit_radius(1.0, 1000.0, 4.444)
        assert isclose(radius, 2 * 1000.0 / (3 * 4.444), rel_tol=1e-12)
        assert abs(radius - 150) < 0.02

    def test_homogeneous(self):
        one = required_transmit_radius(1.0, 1000.0, 4.0)
        two = required_transmit_radius(1.0, 1000.0, 8.0)
        assert isclose(one, 2 * two, rel_tol=1e-15)

    @pytest.mark.parametrize(
        "wavelength,distance,radius",
        [(1.0, 1000.0, 150.0), (10.0, 75.0, 30.0), (0.3, 55.0, 4.5)],
    )
    def test_round_trip(self, wavelength, distance, radius):
        grid = make_grid(wavelength, radius, distance)
        recovered = required_transmit_radius(
            wavelength, distance, grid.cell_radius
        )
        assert isclose(recovered, radius, rel_tol=1e-12)

        again = make_grid(wavelength, recovered, distance)
        assert isclose(again.cell_radius, grid.cell_radius, rel_tol=1e-12)

    def test_non_positive(self):
        with pytest.raises(NonPositiveInput):
            required_transmit_radius(1.0, 1000.0, 0.0)


def test_grid_index_parse():
    assert GridIndex.parse("2,-5") == GridIndex(2, -5)
    assert str(GridIndex(-1, 3)) == "-1,3"
    with pytest.raises(ValueError):
        GridIndex.parse("2")
    with pytest.raises(ValueError):
        GridIndex(0.5, 1)


def test_direct_grid_validation():
    with pytest.raises(NonPositiveInput):
        FractalGrid(1.0, 150.0, 1000.0, 0.0, 1.0)
