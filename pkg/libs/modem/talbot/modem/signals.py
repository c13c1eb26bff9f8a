import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from talbot.modem.streams import complex_normal, stream

BPSK = "bpsk"
GAUSSIAN = "gaussian"
CONSTELLATIONS = (BPSK, GAUSSIAN)


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    """Per-mode transmit powers `P_l`, stored with their amplitudes"""

    powers: np.ndarray

    def __post_init__(self):
        powers = np.asarray(self.powers, dtype=float)
        if powers.ndim != 1 or not len(powers):
            raise ValueError(
                f"Powers must be a non-empty vector, got shape {powers.shape}"
            )
        if not np.isfinite(powers).all() or (powers < 0).any():
            raise ValueError(
                f"Powers must be finite and non-negative, got {powers}"
            )
        object.__setattr__(self, "powers", powers)

    @classmethod
    def uniform(cls, num_modes: int, power: float = 1.0):
        return cls(np.full(num_modes, power, dtype=float))

    def __len__(self):
        return len(self.powers)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.sqrt(self.powers)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.amplitudes)

    @property
    def active(self) -> np.ndarray:
        return self.powers > 0

    @property
    def mean_active_power(self) -> float:
        active = self.powers[self.active]
        return float(active.mean()) if len(active) else 0.0


@dataclass(frozen=True, eq=False)
class SymbolVector:
    """
    Per-mode symbols. The leading axis indexes modes; an optional
    trailing axis holds independent channel uses.
    """

    symbols: np.ndarray
    constellation: str = BPSK

    def __post_init__(self):
        if self.constellation not in CONSTELLATIONS:
            raise ValueError(
                "Unknown constellation '{}', expected one of {}".format(
                    self.constellation, CONSTELLATIONS
                )
            )

        symbols = np.asarray(self.symbols)
        if self.constellation == BPSK:
            symbols = symbols.astype(float)
            if not np.isin(symbols, (-1.0, 1.0)).all():
                raise ValueError("BPSK symbols must all be +1 or -1")
        else:
            symbols = symbols.astype(complex)
        object.__setattr__(self, "symbols", symbols)

    def __len__(self):
        return len(self.symbols)

    @property
    def bits(self) -> np.ndarray:
        if self.constellation != BPSK:
            raise ValueError("Only BPSK symbols carry bits")
        return (self.symbols < 0).astype(np.uint8)

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "SymbolVector":
        return cls(1.0 - 2.0 * np.asarray(bits, dtype=float), BPSK)

    @classmethod
    def random(
        cls,
        rng: np.random.Generator,
        num_modes: int,
        batch: Optional[int] = None,
        constellation: str = BPSK,
    ) -> "SymbolVector":
        shape = (num_modes,) if batch is None else (num_modes, batch)
        if constellation == BPSK:
            return cls.from_bits(rng.integers(0, 2, size=shape))
        return cls(complex_normal(rng, 1.0, shape), constellation)


@dataclass(frozen=True)
class NoiseSpec:
    """
    Receiver noise: circular complex Gaussian with `variance`
    per receive element, drawn from the stream `(seed, *key)`.
    """

    variance: float
    seed: int = 0
    key: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if math.isnan(self.variance) or self.variance < 0:
            raise ValueError(
                f"Noise variance must be non-negative, got {self.variance}"
            )

    def sample(self, shape: Tuple[int, ...]) -> np.ndarray:
        rng = stream(self.seed, *self.key)
        return complex_normal(rng, self.variance, shape)
