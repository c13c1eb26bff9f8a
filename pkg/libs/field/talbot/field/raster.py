from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from talbot.field.evaluate import Layout, NonPositiveDistance, sample_field

# number of points evaluated per batch when rastering
CHUNK_SIZE = 2**15


def _check_range(name: str, bounds: Tuple[float, float]):
    low, high = (float(i) for i in bounds)
    if not (np.isfinite([low, high]).all() and low < high):
        raise ValueError(
            f"{name} must be strictly increasing, got ({low}, {high})"
        )
    return low, high


def _pixel_centers(bounds: Tuple[float, float], count: int) -> np.ndarray:
    low, high = bounds
    return low + (np.arange(count) + 0.5) * (high - low) / count


@dataclass(frozen=True)
class MapSpec:
    """
    Rectangular raster of the receive plane at `z`, sampled at
    the centers of `nx` by `ny` pixels.
    """

    z: float
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    nx: int
    ny: int

    def __post_init__(self):
        if not self.z > 0:
            raise NonPositiveDistance(
                f"Map plane z must be positive, got {self.z}"
            )
        for name in ("x_range", "y_range"):
            bounds = _check_range(name, getattr(self, name))
            object.__setattr__(self, name, bounds)
        for name in ("nx", "ny"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    @classmethod
    def square(cls, z: float, half_width: float, pixels: int) -> "MapSpec":
        bounds = (-half_width, half_width)
        return cls(z, bounds, bounds, pixels, pixels)

    @property
    def x(self) -> np.ndarray:
        return _pixel_centers(self.x_range, self.nx)

    @property
    def y(self) -> np.ndarray:
        return _pixel_centers(self.y_range, self.ny)

    @property
    def pixel_size(self) -> Tuple[float, float]:
        dx = (self.x_range[1] - self.x_range[0]) / self.nx
        dy = (self.y_range[1] - self.y_range[0]) / self.ny
        return dx, dy

    def points(self) -> np.ndarray:
        """Cartesian pixel centers, shape `(ny, nx, 3)`"""
        xx, yy = np.meshgrid(self.x, self.y)
        return np.stack([xx, yy, np.full_like(xx, self.z)], axis=-1)


@dataclass(frozen=True, eq=False)
class FieldMap:
    """
    Complex field samples over a `MapSpec`, indexed
    `samples[iy, ix]` so that rows run along x.
    """

    spec: MapSpec
    samples: np.ndarray

    def __post_init__(self):
        shape = (self.spec.ny, self.spec.nx)
        if self.samples.shape != shape:
            raise ValueError(
                "Samples of shape {} don't match a {} raster".format(
                    self.samples.shape, shape
                )
            )

    @property
    def z(self) -> float:
        return self.spec.z

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.samples)

    @property
    def normalized_power(self) -> np.ndarray:
        power = self.power
        peak = power.max()
        return power / peak if peak > 0 else power

    def power_db(self) -> np.ndarray:
        """Power in dB relative to the map maximum"""
        with np.errstate(divide="ignore"):
            return 10 * np.log10(self.normalized_power)


def render_field_map(
    layout: Layout,
    excitation: np.ndarray,
    spec: MapSpec,
    wavelength: float = 1.0,
    approximate: bool = False,
) -> FieldMap:
    """
    Raster the field of an excited (single or composite) array.
    Pixels are evaluated in fixed-size batches, and each pixel only
    sums over elements, so the result is bit-identical however the
    batches are split.

    Args:
        layout:
            The transmitting array
        excitation:
            Complex amplitude of each element
        spec:
            Raster geometry
        wavelength:
            Carrier wavelength in the units of the layout and spec
        approximate:
            Evaluate the paraxial field instead of the exact one
    """
    points = spec.points().reshape(-1, 3)
    samples = np.empty(len(points), dtype=complex)
    for start in range(0, len(points), CHUNK_SIZE):
        chunk = slice(start, start + CHUNK_SIZE)
        samples[chunk] = sample_field(
            layout.positions,
            excitation,
            points[chunk],
            wavelength,
            approximate,
        )
    return FieldMap(spec, samples.reshape(spec.ny, spec.nx))


def locate_nulls(
    field_map: FieldMap, window: int = 3, floor: float = 0.05
) -> np.ndarray:
    """
    Find local minima of a map's power that sit below `floor`
    times the map maximum. Pixels on the map border are ignored
    since their neighborhood is incomplete.

    Returns:
        Array of shape `(K, 2)` with the `(x, y)` pixel centers
        of the nulls, in row-major order.
    """
    power = field_map.normalized_power
    smallest = ndimage.minimum_filter(power, size=window, mode="nearest")
    mask = (power == smallest) & (power <= floor)

    edge = window // 2
    if edge:
        mask[:edge], mask[-edge:] = False, False
        mask[:, :edge], mask[:, -edge:] = False, False

    iy, ix = np.nonzero(mask)
    return np.stack([field_map.spec.x[ix], field_map.spec.y[iy]], axis=-1)
