import math

import numpy as np
import pytest

from talbot.field import (
    CompositeLayout,
    MapSpec,
    composite_two_layer_layout,
    mode_excitation,
    render_field_map,
)
from talbot.geometry import NonPositiveInput, UcaLayout


@pytest.fixture
def composite():
    return composite_two_layer_layout(150.0, 0.5, 6)


def test_positions(composite):
    assert composite.inner_count == 6
    assert composite.element_count == 36
    assert composite.positions.shape == (36, 3)

    radii = np.hypot(*composite.centers[:, :2].T)
    np.testing.assert_allclose(radii, 150.0)
    np.testing.assert_allclose(composite.centers.mean(axis=0), 0, atol=1e-12)

    # every element sits half a wavelength from its sub-array center
    offsets = composite.positions.reshape(6, 6, 3) - composite.centers[:, None]
    np.testing.assert_allclose(np.linalg.norm(offsets, axis=-1), 0.5)


@pytest.mark.parametrize("mode", range(6))
def test_excitation_power(composite, mode):
    excitation = composite.mode_excitation(mode)
    assert math.isclose(np.sum(np.abs(excitation) ** 2), 1.0)
    np.testing.assert_allclose(np.abs(excitation) ** 2, 1 / 36)

    # every sub-array carries the single-array mode profile
    inner = excitation.reshape(6, 6)
    expected = mode_excitation(6, mode) / math.sqrt(6)
    for row in inner:
        np.testing.assert_allclose(row, expected, atol=1e-15)


@pytest.mark.parametrize("outer_mode", [0, 1, 3])
def test_mode_matrix_orthonormal(outer_mode):
    composite = composite_two_layer_layout(
        150.0, 0.5, 6, outer_mode=outer_mode
    )
    matrix = composite.mode_matrix()
    assert matrix.shape == (36, 6)
    gram = matrix.conj().T @ matrix
    assert np.abs(gram - np.eye(6)).max() <= 1e-12


def test_weaker_than_single_layer(composite):
    spec = MapSpec.square(1000.0, 6.0, 61)
    single = render_field_map(
        UcaLayout(150.0, 6), mode_excitation(6, 1), spec
    )
    layered = render_field_map(composite, composite.mode_excitation(1), spec)
    assert layered.power.max() < 0.5 * single.power.max()


def test_validation():
    with pytest.raises(NonPositiveInput):
        composite_two_layer_layout(0.0, 0.5, 6)
    with pytest.raises(NonPositiveInput):
        composite_two_layer_layout(150.0, -0.5, 6)
    with pytest.raises(NonPositiveInput):
        composite_two_layer_layout(150.0, 0.5, 6, outer_count=0)
    with pytest.raises(NonPositiveInput):
        CompositeLayout(())
    with pytest.raises(ValueError):
        CompositeLayout((UcaLayout(1.0, 6), UcaLayout(1.0, 4)))
    with pytest.raises(ValueError):
        composite_two_layer_layout(150.0, 0.5, 6).mode_excitation(1, -1.0)
