import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from talbot.field.composite import CompositeLayout
from talbot.geometry import DimensionMismatch, UcaLayout
from talbot.modem import unit_idft


class NonPositiveDistance(ValueError):
    pass


@dataclass(frozen=True)
class FieldPoint:
    """A receive point in cylindrical coordinates `(rho, phi, z)`"""

    rho: float
    phi: float
    z: float

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError(f"rho must be non-negative, got {self.rho}")
        if not self.z > 0:
            raise NonPositiveDistance(f"z must be positive, got {self.z}")

    @classmethod
    def from_cartesian(cls, x: float, y: float, z: float) -> "FieldPoint":
        return cls(math.hypot(x, y), math.atan2(y, x), z)

    @property
    def cartesian(self) -> np.ndarray:
        return np.array(
            [
                self.rho * math.cos(self.phi),
                self.rho * math.sin(self.phi),
                self.z,
            ]
        )


def _offsets(positions: np.ndarray, xyz: np.ndarray):
    positions = np.asarray(positions, dtype=float)
    xyz = np.asarray(xyz, dtype=float)
    if positions.ndim != 2 or positions.shape[-1] != 3:
        raise DimensionMismatch(
            f"Element positions must have shape (N, 3), got {positions.shape}"
        )
    if xyz.shape[-1] != 3:
        raise DimensionMismatch(
            f"Points must have 3 coordinates, got shape {xyz.shape}"
        )

    dz = xyz[..., None, 2] - positions[:, 2]
    if not (dz > 0).all():
        raise NonPositiveDistance(
            "Every receive point must lie beyond the transmit plane, "
            "got a separation of {}".format(dz.min())
        )
    transverse = (xyz[..., None, 0] - positions[:, 0]) ** 2 + (
        xyz[..., None, 1] - positions[:, 1]
    ) ** 2
    return dz, transverse


def element_response(
    positions: np.ndarray,
    xyz: np.ndarray,
    wavelength: float = 1.0,
    approximate: bool = False,
) -> np.ndarray:
    """
    Free-space response `lambda / (4 pi d) exp(-2j pi d / lambda)`
    of isotropic elements at `positions` observed at the Cartesian
    points `xyz`.

    The path length is split into its axial part `dz` and the
    transverse excess `d - dz`, and each is turned into a phase
    separately. The axial phase is identical for all elements in
    a plane, so it cancels exactly between elements and symmetric
    excitations null to floating point precision.

    Args:
        positions:
            Element coordinates, shape `(N, 3)`
        xyz:
            Observation points, shape `(..., 3)`
        wavelength:
            Carrier wavelength in the same units as the coordinates
        approximate:
            If True, use the paraxial path `dz + rho'^2 / (2 dz)`
            and the constant amplitude `lambda / (4 pi dz)`

    Returns:
        Complex array of shape `(..., N)`
    """
    dz, transverse = _offsets(positions, xyz)
    if approximate:
        excess = transverse / (2 * dz)
        amplitude = wavelength / (4 * np.pi * dz)
    else:
        distance = np.sqrt(dz**2 + transverse)
        excess = transverse / (dz + distance)
        amplitude = wavelength / (4 * np.pi * distance)

    axial = np.exp(-2j * np.pi * dz / wavelength)
    return amplitude * axial * np.exp(-2j * np.pi * excess / wavelength)


def _check_excitation(excitation: np.ndarray, element_count: int):
    excitation = np.asarray(excitation, dtype=complex)
    if excitation.shape != (element_count,):
        raise DimensionMismatch(
            "Excitation of shape {} doesn't match {} elements".format(
                excitation.shape, element_count
            )
        )
    if not np.isfinite(excitation).all():
        raise ValueError("Excitation contains non-finite values")
    return excitation


def sample_field(
    positions: np.ndarray,
    excitation: np.ndarray,
    xyz: np.ndarray,
    wavelength: float = 1.0,
    approximate: bool = False,
) -> np.ndarray:
    """Field of an excited array at each of the points `xyz`"""
    positions = np.asarray(positions, dtype=float)
    excitation = _check_excitation(excitation, len(positions))
    response = element_response(positions, xyz, wavelength, approximate)

    # reduce over elements only, one point at a time, so that
    # every sample is independent of how many points are batched
    return (response * excitation).sum(axis=-1)


def sample_exact(positions, excitation, xyz, wavelength: float = 1.0):
    return sample_field(positions, excitation, xyz, wavelength, False)


def sample_approx(positions, excitation, xyz, wavelength: float = 1.0):
    return sample_field(positions, excitation, xyz, wavelength, True)


def path_length_exact(element_position: np.ndarray, point: FieldPoint):
    x, y, z = point.cartesian
    xe, ye, ze = element_position
    return math.sqrt((x - xe) ** 2 + (y - ye) ** 2 + (z - ze) ** 2)


def path_length_approx(
    element_angle: float, transmit_radius: float, point: FieldPoint
) -> float:
    rho, z = point.rho, point.z
    cross = 2 * rho * transmit_radius * math.cos(point.phi - element_angle)
    return z + (rho**2 + transmit_radius**2 - cross) / (2 * z)


Layout = Union[UcaLayout, CompositeLayout]


def field_exact(
    layout: Layout,
    excitation: np.ndarray,
    point: FieldPoint,
    wavelength: float = 1.0,
) -> complex:
    """
    Field of an excited array at a single point, using the
    true element distances for both amplitude and phase.
    Amplitudes follow the `lambda / (4 pi d)` convention and are
    only meaningful relative to one another.
    """
    value = sample_exact(
        layout.positions, excitation, point.cartesian, wavelength
    )
    return complex(value)


def field_approx(
    layout: Layout,
    excitation: np.ndarray,
    point: FieldPoint,
    wavelength: float = 1.0,
) -> complex:
    value = sample_approx(
        layout.positions, excitation, point.cartesian, wavelength
    )
    return complex(value)


def mode_excitation(
    element_count: int, mode: int, power: float = 1.0
) -> np.ndarray:
    """Column `mode` of the unit IDFT, scaled to carry `power`"""
    if power < 0:
        raise ValueError(f"Mode power must be non-negative, got {power}")
    column = unit_idft(element_count)[:, mode % element_count]
    return math.sqrt(power) * column


def phase_winding(
    layout: Layout,
    excitation: np.ndarray,
    center: np.ndarray,
    radius: float,
    samples: int = 720,
    wavelength: float = 1.0,
    approximate: bool = True,
) -> float:
    """
    Phase accumulated by the field along a counter-clockwise
    circle of `radius` around `center` on the receive plane.
    A vortex of charge `l` inside the circle gives `2 pi l`.
    """
    if samples < 3:
        raise ValueError(f"Need at least 3 samples, got {samples}")
    x0, y0, z = center
    theta = 2 * np.pi * np.arange(samples + 1) / samples
    xyz = np.stack(
        [
            x0 + radius * np.cos(theta),
            y0 + radius * np.sin(theta),
            np.full_like(theta, z),
        ],
        axis=-1,
    )
    values = sample_field(
        layout.positions, excitation, xyz, wavelength, approximate
    )
    steps = np.angle(values[1:] / values[:-1])
    return float(steps.sum())
