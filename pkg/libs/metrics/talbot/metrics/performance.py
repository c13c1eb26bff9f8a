import numpy as np
from scipy import special

from talbot.channel import OamChannel
from talbot.geometry import DimensionMismatch
from talbot.modem import PowerAllocation

# modes averaged over by the link-level BER
NUM_MODES = 6


class ModeCountMismatch(ValueError):
    pass


def _check_sinr(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if np.isnan(gamma).any() or (gamma < 0).any():
        raise ValueError(f"SINR values must be non-negative, got {gamma}")
    return gamma


def sinr(oam: OamChannel, p: PowerAllocation, sigma2: float) -> np.ndarray:
    """
    Per-mode signal to interference plus noise ratio

    `gamma_l = P_l |h'_l|^2 / (sigma2 + sum_{k != l} P_k |H'_{l,k}|^2)`

    computed on the leading square block of `H'`. A mode that
    receives neither signal, interference nor noise has an SINR
    of 0.

    Args:
        oam:
            Mode-domain channel
        p:
            Transmit power of each mode
        sigma2:
            Noise variance per receive element
    """
    if np.isnan(sigma2) or sigma2 < 0:
        raise ValueError(f"Noise variance must be non-negative, got {sigma2}")
    if len(p) != oam.num_modes:
        raise DimensionMismatch(
            "Got {} mode powers for a {} mode channel".format(
                len(p), oam.num_modes
            )
        )

    signal = np.abs(oam.gains) ** 2 * p.powers
    interference = (np.abs(oam.interference) ** 2 * p.powers).sum(axis=1)
    denominator = sigma2 + interference

    gamma = np.zeros_like(signal)
    mask = denominator > 0
    gamma[mask] = signal[mask] / denominator[mask]
    gamma[~mask & (signal > 0)] = np.inf
    return gamma


def capacity(gamma) -> float:
    """Sum capacity `sum_l log2(1 + gamma_l)` in bits/s/Hz"""
    gamma = _check_sinr(gamma)
    return float(np.log2(1 + gamma).sum())


def erfc(x):
    """Complementary error function `(2 / sqrt(pi)) int_x^inf e^{-t^2} dt`"""
    return special.erfc(x)


def ber_per_mode(gamma) -> np.ndarray:
    """BPSK bit error probability `erfc(sqrt(gamma_l)) / 2` of each mode"""
    gamma = _check_sinr(gamma)
    return 0.5 * erfc(np.sqrt(gamma))


def ber_analytic(gamma, num_modes: int = NUM_MODES) -> float:
    """
    Average BPSK bit error probability over all modes,
    `(1 / (2 num_modes)) sum_l erfc(sqrt(gamma_l))`. Inter-mode
    interference is treated as additional Gaussian noise.
    """
    gamma = _check_sinr(gamma)
    if gamma.shape != (num_modes,):
        raise ModeCountMismatch(
            "Analytic BER averages over {} modes, got SINRs of "
            "shape {}".format(num_modes, gamma.shape)
        )
    return float(ber_per_mode(gamma).mean())
