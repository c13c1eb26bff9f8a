import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from harness.config import ExperimentConfig
from talbot.channel import ChannelMatrix, build_free_space
from talbot.field import Layout, composite_two_layer_layout
from talbot.geometry import FractalGrid, UcaLayout, grid_center
from talbot.metrics import Link, LinkResult, evaluate_link
from talbot.modem import PowerAllocation, UnitDftPair, make_pair, unit_dft


@dataclass(frozen=True, eq=False)
class Geometry:
    """Arrays and transforms of one experiment, in wavelengths"""

    transmit: Layout
    receive: UcaLayout
    pair: UnitDftPair
    grid: Optional[FractalGrid]


def build_transmit(config: ExperimentConfig) -> Layout:
    transmit = config.transmit
    if transmit.baseline == "two-layer":
        return composite_two_layer_layout(
            transmit.radius, transmit.inner_radius, transmit.inner_elements
        )
    return UcaLayout(transmit.element_radius, transmit.elements)


def receive_center(config: ExperimentConfig) -> np.ndarray:
    """
    Receive array center on the plane at the experiment distance.
    Without a fractal grid only the axis can be addressed by
    index, which config validation guarantees.
    """
    receive = config.receive
    if receive.center is not None:
        return np.array([*receive.center, config.distance])
    if config.grid is None:
        return np.array([0.0, 0.0, config.distance])
    return grid_center(receive.grid_index, config.grid)


def build_geometry(config: ExperimentConfig) -> Geometry:
    transmit = build_transmit(config)
    receive = UcaLayout(
        config.receive.radius,
        config.receive.elements,
        center=tuple(receive_center(config)),
        angular_offset=config.receive.angular_offset,
    )

    if config.transmit.baseline == "two-layer":
        pair = UnitDftPair(
            transmit.mode_matrix(), unit_dft(config.receive.elements)
        )
    else:
        pair = make_pair(config.transmit.elements, config.receive.elements)
    return Geometry(transmit, receive, pair, config.grid)


def power_allocation(config: ExperimentConfig) -> PowerAllocation:
    if config.link.powers is None:
        return PowerAllocation.uniform(config.num_modes)
    return PowerAllocation(np.array(config.link.powers))


def noise_variance(
    config: ExperimentConfig, power: PowerAllocation, snr_db: float
) -> float:
    """
    Noise variance that realizes `snr_db` under the config's
    SNR reference, see `LinkConfig`. Both references use the
    mean power of the active modes.
    """
    snr = 10 ** (snr_db / 10)
    variance = power.mean_active_power / snr
    if config.link.snr_reference == "free_space":
        hop = 1 / (4 * math.pi * config.reference_distance)
        variance *= hop**2
    return variance


def build_link(
    config: ExperimentConfig,
    snr_db: float,
    channel: Optional[ChannelMatrix] = None,
) -> Link:
    """
    Assemble the link of an experiment at one SNR. An ingested
    `channel` replaces the free-space channel of the config's
    geometry, and is analyzed with plain DFTs over its own
    element counts.
    """
    power = power_allocation(config)
    if channel is not None:
        if len(power) != channel.n_tx:
            power = PowerAllocation.uniform(channel.n_tx)
        variance = noise_variance(config, power, snr_db)
        pair = make_pair(channel.n_tx, channel.n_rx)
        return Link(channel, pair, power, variance)

    geometry = build_geometry(config)
    channel = build_free_space(
        geometry.transmit,
        geometry.receive,
        variant=config.link.variant,
    )
    variance = noise_variance(config, power, snr_db)
    return Link(channel, geometry.pair, power, variance)


def run_link(
    config: ExperimentConfig,
    snr_db: Optional[float] = None,
    channel: Optional[ChannelMatrix] = None,
    num_workers: int = 1,
) -> LinkResult:
    """
    Evaluate one link of an experiment.

    Args:
        config:
            The experiment
        snr_db:
            SNR to evaluate at. Defaults to the first configured SNR.
        channel:
            Optional ingested channel to use in place of the
            free-space channel
        num_workers:
            Threads used by the Monte Carlo simulation
    """
    if snr_db is None:
        snr_db = config.link.snr_db[0]
    link = build_link(config, snr_db, channel)
    logging.debug(
        "Evaluating {} link at {} dB SNR, noise variance {:.3e}".format(
            config.transmit.baseline, snr_db, link.noise_variance
        )
    )
    return evaluate_link(
        link,
        snr_db,
        trials=config.link.trials,
        seed=config.seed,
        num_workers=num_workers,
    )
