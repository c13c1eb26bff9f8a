import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from talbot.geometry.layout import NonPositiveInput, check_positive

SQRT3 = math.sqrt(3)


class SubWavelengthAperture(ValueError):
    pass


@dataclass(frozen=True)
class GridIndex:
    """Row `m` and column `n` of a center on the fractal lattice"""

    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValueError(
                    f"Grid index {name} must be an integer, got {value}"
                )
            object.__setattr__(self, name, int(value))

    @classmethod
    def parse(cls, token: str) -> "GridIndex":
        try:
            m, n = (int(i) for i in token.split(","))
        except ValueError:
            raise ValueError(
                f"Can't parse grid index '{token}', expected 'm,n'"
            ) from None
        return cls(m, n)

    def __str__(self):
        return f"{self.m},{self.n}"


@dataclass(frozen=True)
class FractalGrid:
    """
    Hexagonal lattice of fractal OAM centers on the receive
    plane at `distance` from a UCA of radius `transmit_radius`.
    Build these with `make_grid` rather than directly.
    """

    wavelength: float
    transmit_radius: float
    distance: float
    cell_radius: float
    rr_bound: float

    def __post_init__(self):
        check_positive(
            wavelength=self.wavelength,
            transmit_radius=self.transmit_radius,
            distance=self.distance,
            cell_radius=self.cell_radius,
            rr_bound=self.rr_bound,
        )

    @property
    def scale(self) -> float:
        """The lattice length unit `lambda * z / R_t`"""
        return self.wavelength * self.distance / self.transmit_radius

    @property
    def pitch(self) -> float:
        """Spacing between neighboring centers"""
        return SQRT3 * self.cell_radius

    @property
    def row_spacing(self) -> float:
        return SQRT3 * self.scale / 3


def make_grid(
    wavelength: float, transmit_radius: float, distance: float
) -> FractalGrid:
    """
    Compute the fractal grid produced by a transmit UCA.

    Args:
        wavelength:
            Carrier wavelength
        transmit_radius:
            Radius `R_t` of the transmit UCA. Must exceed half a
            wavelength for replicas to form at all, and should be
            at least three wavelengths for them to be well separated.
        distance:
            Distance `z` from the transmit plane to the receive plane

    Returns:
        The grid, with its cell radius `(2/3) lambda z / R_t` and
        the largest receive radius that fits inside one cell.
    """
    check_positive(
        wavelength=wavelength,
        transmit_radius=transmit_radius,
        distance=distance,
    )
    if transmit_radius <= wavelength / 2:
        raise SubWavelengthAperture(
            "Transmit radius {} must exceed half a wavelength ({}) "
            "to produce fractal replicas".format(
                transmit_radius, wavelength / 2
            )
        )
    elif transmit_radius < 3 * wavelength:
        logging.warning(
            "Transmit radius {} is below 3 wavelengths, fractal "
            "replicas will be poorly separated".format(transmit_radius)
        )

    scale = wavelength * distance / transmit_radius
    cell_radius = 2 * scale / 3
    return FractalGrid(
        wavelength=wavelength,
        transmit_radius=transmit_radius,
        distance=distance,
        cell_radius=cell_radius,
        rr_bound=SQRT3 * cell_radius / 3,
    )


def grid_center(idx: GridIndex, grid: FractalGrid) -> np.ndarray:
    # odd rows are shifted by half a column
    offset = 0.5 if idx.n % 2 else 0.0
    x = (idx.m + offset) * 2 * grid.scale
    y = idx.n * grid.row_spacing
    return np.array([x, y, grid.distance])


def enumerate_centers(
    grid: FractalGrid, max_abs_m: int, max_abs_n: int
) -> List[Tuple[GridIndex, np.ndarray]]:
    """
    All lattice centers with `|m| <= max_abs_m` and `|n| <= max_abs_n`,
    ordered by `m` and then by `n`.
    """
    if max_abs_m < 0 or max_abs_n < 0:
        raise NonPositiveInput(
            "Center bounds must be non-negative, got ({}, {})".format(
                max_abs_m, max_abs_n
            )
        )

    centers = []
    for m in range(-max_abs_m, max_abs_m + 1):
        for n in range(-max_abs_n, max_abs_n + 1):
            idx = GridIndex(m, n)
            centers.append((idx, grid_center(idx, grid)))
    return centers


def required_transmit_radius(
    wavelength: float, distance: float, desired_cell_radius: float
) -> float:
    check_positive(
        wavelength=wavelength,
        distance=distance,
        desired_cell_radius=desired_cell_radius,
    )
    return 2 * wavelength * distance / (3 * desired_cell_radius)


def grid_line_orders(x, y, grid: FractalGrid) -> np.ndarray:
    """
    Orders `k` of the five families of grid lines passing through
    the receive-plane point `(x, y)`, one per element pair separated
    by `n_t = 1..5` steps around a six element array. Fractal
    centers are exactly the points where every order is an integer.

    Returns:
        Array with a trailing axis of length 5
    """
    x = np.asarray(x, dtype=float)[..., None]
    y = np.asarray(y, dtype=float)[..., None]
    angle = np.pi * np.arange(1, 6) / 6
    sin, cos = np.sin(angle), np.cos(angle)
    return -2 * (sin**2 * x - sin * cos * y) / grid.scale


def nearest_center(x: float, y: float, grid: FractalGrid) -> GridIndex:
    row = round(y / grid.row_spacing)
    best, best_distance = None, math.inf
    for n in (row - 1, row, row + 1):
        offset = 0.5 if n % 2 else 0.0
        m = round(x / (2 * grid.scale) - offset)
        idx = GridIndex(m, n)
        cx, cy, _ = grid_center(idx, grid)
        distance = math.hypot(x - cx, y - cy)
        if distance < best_distance:
            best, best_distance = idx, distance
    return best
