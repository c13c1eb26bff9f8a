import math

import numpy as np
import pytest

from talbot.field import (
    FieldMap,
    FieldPoint,
    MapSpec,
    NonPositiveDistance,
    field_exact,
    locate_nulls,
    mode_excitation,
    render_field_map,
    sample_exact,
)
from talbot.geometry import UcaLayout, enumerate_centers


def centers_inside(grid, half_width, margin):
    limit = half_width - margin
    centers = enumerate_centers(grid, 3, 6)
    return [
        (idx, c)
        for idx, c in centers
        if abs(c[0]) <= limit and abs(c[1]) <= limit
    ]


class TestMapSpec:
    def test_pixel_centers(self):
        spec = MapSpec(10.0, (-1.0, 1.0), (0.0, 3.0), 4, 3)
        np.testing.assert_allclose(spec.x, [-0.75, -0.25, 0.25, 0.75])
        np.testing.assert_allclose(spec.y, [0.5, 1.5, 2.5])
        assert spec.pixel_size == (0.5, 1.0)

        points = spec.points()
        assert points.shape == (3, 4, 3)
        np.testing.assert_allclose(points[2, 1], [-0.25, 2.5, 10.0])

    def test_square(self):
        spec = MapSpec.square(75.0, 40.0, 161)
        assert spec.nx == spec.ny == 161
        # an odd pixel count puts a pixel on the axis
        assert spec.x[80] == 0

    def test_validation(self):
        with pytest.raises(NonPositiveDistance):
            MapSpec(0.0, (-1, 1), (-1, 1), 4, 4)
        with pytest.raises(ValueError):
            MapSpec(1.0, (1, -1), (-1, 1), 4, 4)
        with pytest.raises(ValueError):
            MapSpec(1.0, (-1, 1), (-1, float("nan")), 4, 4)
        with pytest.raises(ValueError):
            MapSpec(1.0, (-1, 1), (-1, 1), 0, 4)


class TestRender:
    def test_single_pixel(self, wide_layout):
        spec = MapSpec(1000.0, (-1.0, 3.0), (0.0, 2.0), 1, 1)
        excitation = mode_excitation(6, 2)
        field_map = render_field_map(wide_layout, excitation, spec)

        point = FieldPoint.from_cartesian(1.0, 1.0, 1000.0)
        expected = field_exact(wide_layout, excitation, point)
        assert abs(field_map.samples[0, 0] - expected) <= 1e-12 * abs(
            expected
        )

    def test_row_major(self, prototype_layout):
        spec = MapSpec(75.0, (-30.0, 30.0), (-10.0, 20.0), 3, 2)
        excitation = mode_excitation(6, 1)
        field_map = render_field_map(prototype_layout, excitation, spec, 10.0)
        assert field_map.samples.shape == (2, 3)

        for iy, y in enumerate(spec.y):
            for ix, x in enumerate(spec.x):
                expected = sample_exact(
                    prototype_layout.positions,
                    excitation,
                    np.array([x, y, 75.0]),
                    10.0,
                )
                np.testing.assert_allclose(
                    field_map.samples[iy, ix], expected, rtol=1e-14
                )

    def test_chunking(self, monkeypatch, wide_layout):
        spec = MapSpec.square(1000.0, 6.0, 25)
        excitation = mode_excitation(6, 3)
        whole = render_field_map(wide_layout, excitation, spec)

        monkeypatch.setattr("talbot.field.raster.CHUNK_SIZE", 7)
        chunked = render_field_map(wide_layout, excitation, spec)
        assert np.array_equal(whole.samples, chunked.samples)

    def test_power_db(self, wide_layout):
        spec = MapSpec.square(1000.0, 6.0, 31)
        field_map = render_field_map(
            wide_layout, mode_excitation(6, 1), spec, approximate=True
        )
        power_db = field_map.power_db()
        assert power_db.max() == 0
        assert (power_db[np.isfinite(power_db)] <= 0).all()

        np.testing.assert_allclose(
            field_map.phase, np.angle(field_map.samples)
        )

    def test_shape_mismatch(self):
        spec = MapSpec.square(10.0, 1.0, 4)
        with pytest.raises(ValueError):
            FieldMap(spec, np.zeros((4, 5), dtype=complex))


class TestLocateNulls:
    def test_synthetic(self):
        spec = MapSpec.square(1.0, 5.0, 51)
        xx, yy = np.meshgrid(spec.x, spec.y)
        x0, y0 = spec.x[30], spec.y[15]
        samples = np.hypot(xx - x0, yy - y0).astype(complex)
        nulls = locate_nulls(FieldMap(spec, samples))
        np.testing.assert_array_equal(nulls, [[x0, y0]])

    def test_border_ignored(self):
        spec = MapSpec.square(1.0, 5.0, 51)
        xx, yy = np.meshgrid(spec.x, spec.y)
        samples = np.hypot(xx - spec.x[0], yy).astype(complex)
        assert len(locate_nulls(FieldMap(spec, samples))) == 0

    def test_prototype_centers(self, prototype_grid, prototype_layout):
        spec = MapSpec.square(75.0, 40.0, 161)
        field_map = render_field_map(
            prototype_layout,
            mode_excitation(6, 1),
            spec,
            wavelength=10.0,
            approximate=True,
        )
        nulls = locate_nulls(field_map)
        tolerance = math.hypot(*spec.pixel_size)

        centers = centers_inside(
            prototype_grid, 40.0, 3 * spec.pixel_size[0]
        )
        assert len(centers) == 7
        for idx, center in centers:
            distance = np.hypot(*(nulls - center[:2]).T).min()
            assert distance <= tolerance, idx

    def test_wide_centers(self, wide_grid, wide_layout):
        spec = MapSpec.square(1000.0, 12.0, 121)
        field_map = render_field_map(
            wide_layout, mode_excitation(6, 1), spec, approximate=True
        )
        nulls = locate_nulls(field_map)
        tolerance = math.hypot(*spec.pixel_size)

        centers = centers_inside(wide_grid, 12.0, 3 * spec.pixel_size[0])
        assert len(centers) >= 7
        for idx, center in centers:
            distance = np.hypot(*(nulls - center[:2]).T).min()
            assert distance <= tolerance, idx
