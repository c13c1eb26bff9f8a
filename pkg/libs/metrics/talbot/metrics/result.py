import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from talbot.metrics.monte_carlo import (
    Link,
    MonteCarloEstimate,
    ber_monte_carlo,
)
from talbot.metrics.performance import (
    NUM_MODES,
    ber_analytic,
    ber_per_mode,
    capacity,
    sinr,
)


@dataclass(frozen=True, eq=False)
class LinkResult:
    sinr: np.ndarray
    capacity: float
    ber_analytic: float
    ber_per_mode: np.ndarray
    snr_db: float
    noise_variance: float
    monte_carlo: Optional[MonteCarloEstimate] = None

    def __post_init__(self):
        if (np.asarray(self.sinr) < 0).any():
            raise ValueError(f"SINR must be non-negative, got {self.sinr}")
        if self.capacity < 0:
            raise ValueError(
                f"Capacity must be non-negative, got {self.capacity}"
            )
        if not 0 <= self.ber_analytic <= 0.5:
            raise ValueError(
                f"Analytic BER {self.ber_analytic} outside [0, 0.5]"
            )

    @property
    def num_modes(self) -> int:
        return len(self.sinr)


def evaluate_link(
    link: Link,
    snr_db: float,
    trials: int = 0,
    seed: int = 0,
    num_workers: int = 1,
) -> LinkResult:
    """
    SINR, capacity and BER of a link, plus a Monte Carlo BER
    when `trials` is positive. The analytic BER averages over
    the modes that carry power, the same modes the Monte Carlo
    estimate counts bits on, or over every mode when none do.
    """
    gamma = sinr(link.oam, link.power, link.noise_variance)
    if len(gamma) != NUM_MODES:
        logging.warning(
            "Link carries {} modes. Fractal grid centers are only "
            "derived for six element arrays, whose replicas tessellate "
            "the receive plane, so grid based results may not "
            "apply".format(len(gamma))
        )

    active = link.power.active
    if not active.any():
        active = np.ones_like(active)

    estimate = None
    if trials > 0:
        estimate = ber_monte_carlo(
            link, trials, seed, num_workers=num_workers
        )
    return LinkResult(
        sinr=gamma,
        capacity=capacity(gamma),
        ber_analytic=ber_analytic(gamma[active], int(active.sum())),
        ber_per_mode=ber_per_mode(gamma),
        snr_db=snr_db,
        noise_variance=link.noise_variance,
        monte_carlo=estimate,
    )
