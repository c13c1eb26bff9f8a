from typing import TYPE_CHECKING, Union

import numpy as np

from talbot.geometry import DimensionMismatch
from talbot.modem.dft import UnitDftPair
from talbot.modem.signals import (
    BPSK,
    NoiseSpec,
    PowerAllocation,
    SymbolVector,
)

if TYPE_CHECKING:
    from talbot.channel import ChannelMatrix, OamChannel

# equalizer gains smaller than this are treated as zero
MIN_GAIN = 1e-300


class ZeroGain(ValueError):
    pass


def _column_shape(values: np.ndarray, ndim: int) -> np.ndarray:
    return values.reshape((-1,) + (1,) * (ndim - 1))


def transmit(
    x: SymbolVector, p: PowerAllocation, pair: UnitDftPair
) -> np.ndarray:
    """
    Synthesize element excitations `s = W diag(sqrt(P)) x`.
    A trailing batch axis on `x` is carried through to `s`.
    """
    if len(x) != len(p) or pair.num_modes != len(p):
        raise DimensionMismatch(
            "Can't transmit {} symbols with {} powers over {} modes".format(
                len(x), len(p), pair.num_modes
            )
        )
    amplitudes = _column_shape(p.amplitudes, x.symbols.ndim)
    return pair.idft @ (amplitudes * x.symbols)


def propagate(
    s: np.ndarray, h: Union["ChannelMatrix", np.ndarray], noise: NoiseSpec
) -> np.ndarray:
    """Received signal `r = H s + n`"""
    entries = np.asarray(getattr(h, "entries", h))
    if entries.ndim != 2 or entries.shape[1] != len(s):
        raise DimensionMismatch(
            "Channel of shape {} can't carry {} element signals".format(
                entries.shape, len(s)
            )
        )

    r = entries @ s
    if noise.variance > 0:
        r = r + noise.sample(r.shape)
    return r


def demodulate(r: np.ndarray, pair: UnitDftPair) -> np.ndarray:
    if len(r) != pair.num_rx_elements:
        raise DimensionMismatch(
            "Received {} samples for a {} element DFT".format(
                len(r), pair.num_rx_elements
            )
        )
    return pair.dft @ r


def detect(
    y: np.ndarray,
    oam: "OamChannel",
    p: PowerAllocation,
    constellation: str = BPSK,
) -> SymbolVector:
    """
    Per-mode zero-forcing detection on the first `len(p)` entries
    of the demodulated vector `y`. Each mode is equalized by its
    own gain `h'_l`, after which the minimum-distance BPSK decision
    between `+sqrt(P_l)` and `-sqrt(P_l)` reduces to the sign of the
    real part. Inactive modes decide `+1`.

    Args:
        y:
            Demodulated mode-domain samples, optionally with a
            trailing batch axis
        oam:
            Mode-domain channel whose `gains` are used for
            equalization
        p:
            Transmit power allocation
        constellation:
            Only BPSK has a finite decision set

    Returns:
        The decided symbols
    """
    if constellation != BPSK:
        raise ValueError(
            f"Detection is only defined for BPSK, got '{constellation}'"
        )

    num_modes = len(p)
    gains = np.asarray(oam.gains)
    if len(gains) < num_modes or len(y) < num_modes:
        raise DimensionMismatch(
            "Can't detect {} modes from {} samples and {} gains".format(
                num_modes, len(y), len(gains)
            )
        )
    gains = gains[:num_modes]

    active = p.active
    dead = active & (np.abs(gains) < MIN_GAIN)
    if dead.any():
        raise ZeroGain(
            "Active mode(s) {} have zero channel gain".format(
                np.flatnonzero(dead).tolist()
            )
        )

    y = np.asarray(y)[:num_modes]
    safe = _column_shape(np.where(active, gains, 1), y.ndim)
    equalized = y / safe

    decisions = np.where(equalized.real < 0, -1.0, 1.0)
    decisions[~active] = 1.0
    return SymbolVector(decisions, BPSK)
