"""
Counter-based random streams. Every consumer of randomness
derives its own generator from the run seed plus an integer key
describing what it is used for (e.g. a Monte Carlo block index
and a purpose tag), so draws never depend on scheduling.
"""

from typing import Tuple

import numpy as np

SYMBOLS = 0
NOISE = 1


def stream(seed: int, *key: int) -> np.random.Generator:
    if seed < 0 or any(k < 0 for k in key):
        raise ValueError(
            "Stream seed and key must be non-negative, got {} {}".format(
                seed, key
            )
        )
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(sequence))


def complex_normal(
    rng: np.random.Generator, variance: float, shape: Tuple[int, ...]
) -> np.ndarray:
    """Circular complex Gaussian samples with `E|n|^2 = variance`"""
    scale = np.sqrt(variance / 2)
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return scale * (real + 1j * imag)
