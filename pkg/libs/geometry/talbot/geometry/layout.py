import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

Vector = Tuple[float, float, float]


class NonPositiveInput(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def check_positive(**values: float) -> None:
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveInput(
                f"{name} must be positive and finite, got {value}"
            )


@dataclass(frozen=True)
class UcaLayout:
    """
    Uniform circular array lying in a plane of constant z.
    Element `k` sits at angle `2 pi k / element_count + angular_offset`
    measured from the x-axis of the array plane.

    Args:
        radius:
            Radius of the circle the elements sit on
        element_count:
            Number of equally spaced elements
        center:
            Cartesian coordinates of the circle's center
        angular_offset:
            Rotation of the whole array about its center, in radians.
            With the default of 0 the first element sits on the
            polar axis.
    """

    radius: float
    element_count: int
    center: Vector = (0.0, 0.0, 0.0)
    angular_offset: float = 0.0

    def __post_init__(self):
        check_positive(radius=self.radius)
        if self.element_count < 1 or int(self.element_count) != (
            self.element_count
        ):
            raise NonPositiveInput(
                "element_count must be a positive integer, got {}".format(
                    self.element_count
                )
            )

        center = tuple(float(i) for i in self.center)
        if len(center) != 3:
            raise DimensionMismatch(
                f"Array center must have 3 coordinates, got {len(center)}"
            )
        if not all(map(math.isfinite, center)):
            raise ValueError(f"Array center {center} is not finite")

        object.__setattr__(self, "element_count", int(self.element_count))
        object.__setattr__(self, "center", center)

    @property
    def angles(self) -> np.ndarray:
        k = np.arange(self.element_count)
        return 2 * np.pi * k / self.element_count + self.angular_offset

    @property
    def positions(self) -> np.ndarray:
        """Cartesian element coordinates with shape `(element_count, 3)`"""
        x0, y0, z0 = self.center
        angles = self.angles
        return np.stack(
            [
                x0 + self.radius * np.cos(angles),
                y0 + self.radius * np.sin(angles),
                np.full(self.element_count, z0),
            ],
            axis=-1,
        )

    def moved_to(self, center: Vector) -> "UcaLayout":
        return UcaLayout(
            self.radius, self.element_count, center, self.angular_offset
        )


def to_cylindrical(xyz: np.ndarray) -> np.ndarray:
    """
    Map Cartesian `(x, y, z)` rows to cylindrical `(rho, phi, z)` rows.
    The azimuth uses the full-quadrant arctangent, so points with
    `x < 0` keep their quadrant.
    """
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    return np.stack([np.hypot(x, y), np.arctan2(y, x), z], axis=-1)


def to_cartesian(cylindrical: np.ndarray) -> np.ndarray:
    cylindrical = np.asarray(cylindrical, dtype=float)
    rho, phi, z = (cylindrical[..., i] for i in range(3))
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


def receive_element_coordinates(
    layout: UcaLayout,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Element coordinates of a (receive) array in both frames.

    Returns:
        cartesian:
            Array of shape `(element_count, 3)` holding `(x, y, z)`
        cylindrical:
            Array of shape `(element_count, 3)` holding
            `(rho, phi, z)` of the same elements
    """
    cartesian = layout.positions
    return cartesian, to_cylindrical(cartesian)
