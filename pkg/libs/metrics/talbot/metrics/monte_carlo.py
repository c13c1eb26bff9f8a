import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from talbot.channel import ChannelMatrix, OamChannel, to_oam_domain
from talbot.geometry import DimensionMismatch
from talbot.modem import (
    NOISE,
    SYMBOLS,
    NoiseSpec,
    PowerAllocation,
    SymbolVector,
    UnitDftPair,
    demodulate,
    detect,
    propagate,
    stream,
    transmit,
)

# channel uses simulated per block, each block drawing
# from its own (seed, block) streams
BLOCK_SIZE = 2**16


@dataclass(frozen=True, eq=False)
class Link:
    """Everything needed to push symbols through a channel"""

    channel: ChannelMatrix
    pair: UnitDftPair
    power: PowerAllocation
    noise_variance: float

    def __post_init__(self):
        if self.channel.n_tx != self.pair.num_tx_elements:
            raise DimensionMismatch(
                "Channel with {} transmit elements can't be driven by "
                "a {} element synthesis".format(
                    self.channel.n_tx, self.pair.num_tx_elements
                )
            )
        if self.channel.n_rx != self.pair.num_rx_elements:
            raise DimensionMismatch(
                "Channel with {} receive elements can't be analyzed by "
                "a {} element DFT".format(
                    self.channel.n_rx, self.pair.num_rx_elements
                )
            )
        if len(self.power) != self.pair.num_modes:
            raise DimensionMismatch(
                "Got {} mode powers for {} modes".format(
                    len(self.power), self.pair.num_modes
                )
            )
        if math.isnan(self.noise_variance) or self.noise_variance < 0:
            raise ValueError(
                "Noise variance must be non-negative, got {}".format(
                    self.noise_variance
                )
            )

    @property
    def oam(self) -> OamChannel:
        return to_oam_domain(self.channel, self.pair.idft, self.pair.dft)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """
    Simulated bit error rate over `bits` transmitted bits,
    `trials` channel uses of every active mode.
    """

    errors: int
    bits: int
    trials: int

    @property
    def probability(self) -> float:
        return self.errors / self.bits

    @property
    def stderr(self) -> float:
        p = self.probability
        return math.sqrt(p * (1 - p) / self.bits)

    def interval(self, z: float = 1.96) -> Tuple[float, float]:
        """Normal-approximation confidence interval, clipped to [0, 1]"""
        p, width = self.probability, z * self.stderr
        return max(0.0, p - width), min(1.0, p + width)


def _count_errors(
    link: Link, oam: OamChannel, seed: int, block: int, size: int
) -> np.ndarray:
    num_modes = link.pair.num_modes
    x = SymbolVector.random(stream(seed, block, SYMBOLS), num_modes, size)
    s = transmit(x, link.power, link.pair)

    noise = NoiseSpec(link.noise_variance, seed, key=(block, NOISE))
    y = demodulate(propagate(s, link.channel, noise), link.pair)
    decided = detect(y, oam, link.power)

    errors = (decided.symbols != x.symbols).sum(axis=-1)
    errors[~link.power.active] = 0
    return errors


def ber_monte_carlo(
    link: Link,
    trials: int,
    seed: int = 0,
    block_size: int = BLOCK_SIZE,
    num_workers: int = 1,
) -> MonteCarloEstimate:
    """
    Estimate the BPSK bit error rate of a link by simulating
    transmission, propagation, demodulation and detection.

    Trials are split into fixed blocks whose random draws only
    depend on `seed` and the block index, and error counts are
    integers, so the estimate is identical for any `num_workers`.

    Args:
        link:
            The link to simulate
        trials:
            Number of channel uses. Each use carries one bit
            on every active mode.
        seed:
            Root seed of the random streams
        block_size:
            Channel uses simulated at once
        num_workers:
            Threads to simulate blocks with
    """
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")
    if block_size < 1:
        raise ValueError(f"Block size must be positive, got {block_size}")
    num_active = int(link.power.active.sum())
    if not num_active:
        raise ValueError("Can't estimate a BER with no active modes")

    oam = link.oam
    sizes = [
        min(block_size, trials - start)
        for start in range(0, trials, block_size)
    ]
    logging.debug(
        "Simulating {} trials in {} blocks with {} workers".format(
            trials, len(sizes), num_workers
        )
    )

    def run(block: int) -> np.ndarray:
        return _count_errors(link, oam, seed, block, sizes[block])

    if num_workers > 1:
        with ThreadPoolExecutor(num_workers) as ex:
            counts = list(ex.map(run, range(len(sizes))))
    else:
        counts = [run(block) for block in range(len(sizes))]

    errors = int(np.sum(counts))
    return MonteCarloEstimate(errors, trials * num_active, trials)
