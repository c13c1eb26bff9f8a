import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from talbot.geometry import NonPositiveInput, UcaLayout, check_positive
from talbot.modem import unit_idft


@dataclass(frozen=True)
class CompositeLayout:
    """
    An array of identical sub-UCAs. Modes are synthesized on every
    sub-UCA at once, with each sub-UCA carrying the phase of
    `outer_mode` across the outer ring.

    Args:
        subarrays:
            The sub-UCAs. All must have the same element count.
        outer_mode:
            OAM mode index applied across the sub-UCAs. With the
            default of 0 every sub-UCA radiates in phase.
    """

    subarrays: Tuple[UcaLayout, ...]
    outer_mode: int = 0

    def __post_init__(self):
        subarrays = tuple(self.subarrays)
        if not subarrays:
            raise NonPositiveInput("A composite array needs sub-arrays")
        counts = {s.element_count for s in subarrays}
        if len(counts) > 1:
            raise ValueError(
                "Sub-arrays must have equal element counts, got {}".format(
                    sorted(counts)
                )
            )
        object.__setattr__(self, "subarrays", subarrays)

    @property
    def inner_count(self) -> int:
        return self.subarrays[0].element_count

    @property
    def element_count(self) -> int:
        return self.inner_count * len(self.subarrays)

    @property
    def positions(self) -> np.ndarray:
        return np.concatenate([s.positions for s in self.subarrays])

    @property
    def centers(self) -> np.ndarray:
        return np.array([s.center for s in self.subarrays])

    def mode_matrix(self) -> np.ndarray:
        """
        Element-by-mode synthesis matrix with orthonormal columns.
        Each element carries its sub-UCA's mode phase, scaled by
        `1 / sqrt(len(subarrays))` so that the total power of a mode
        matches that of a single UCA.
        """
        num_sub = len(self.subarrays)
        outer = unit_idft(num_sub)[:, self.outer_mode % num_sub]
        inner = unit_idft(self.inner_count)
        return np.concatenate([weight * inner for weight in outer])

    def mode_excitation(self, mode: int, power: float = 1.0) -> np.ndarray:
        if power < 0:
            raise ValueError(f"Mode power must be non-negative, got {power}")
        column = self.mode_matrix()[:, mode % self.inner_count]
        return math.sqrt(power) * column


def composite_two_layer_layout(
    outer_radius: float,
    inner_radius: float,
    inner_count: int,
    outer_count: int = 6,
    outer_mode: int = 0,
) -> CompositeLayout:
    """
    Six (by default) sub-UCAs of radius `inner_radius`, centered at
    `pi / 3` steps around a circle of radius `outer_radius` on the
    transmit plane.
    """
    check_positive(outer_radius=outer_radius, inner_radius=inner_radius)
    if outer_count < 1:
        raise NonPositiveInput(
            f"outer_count must be positive, got {outer_count}"
        )

    subarrays = []
    for k in range(outer_count):
        angle = 2 * math.pi * k / outer_count
        center = (
            outer_radius * math.cos(angle),
            outer_radius * math.sin(angle),
            0.0,
        )
        subarrays.append(UcaLayout(inner_radius, inner_count, center))
    return CompositeLayout(tuple(subarrays), outer_mode)
