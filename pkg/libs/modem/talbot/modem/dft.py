from dataclasses import dataclass
from typing import Optional

import numpy as np

from talbot.geometry import DimensionMismatch, NonPositiveInput


def _fourier_matrix(n: int, sign: int) -> np.ndarray:
    if n < 1:
        raise NonPositiveInput(f"Transform size must be positive, got {n}")
    k = np.arange(n)
    # reduce the exponent before scaling by 2 pi so that
    # large transforms keep full phase precision
    exponent = np.outer(k, k) % n
    return np.exp(sign * 2j * np.pi * exponent / n) / np.sqrt(n)


def unit_idft(n: int) -> np.ndarray:
    """Unit IDFT matrix, entry `(n1, n2) = exp(+2j pi n1 n2 / n) / sqrt(n)`"""
    return _fourier_matrix(n, 1)


def unit_dft(n: int) -> np.ndarray:
    """Unit DFT matrix, entry `(m1, m2) = exp(-2j pi m1 m2 / n) / sqrt(n)`"""
    return _fourier_matrix(n, -1)


def is_unitary(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """Whether the columns of `matrix` are orthonormal to within `tol`"""
    gram = matrix.conj().T @ matrix
    return np.abs(gram - np.eye(gram.shape[0])).max() <= tol


@dataclass(frozen=True, eq=False)
class UnitDftPair:
    """
    Synthesis and analysis transforms of an OAM link.

    Args:
        idft:
            Element-by-mode synthesis matrix `W`. For a single
            UCA this is the square unit IDFT, for composite arrays
            it may be tall, but its columns are always orthonormal.
        dft:
            Square unit DFT `W'` applied across the receive elements
    """

    idft: np.ndarray
    dft: np.ndarray

    def __post_init__(self):
        for name in ("idft", "dft"):
            matrix = np.asarray(getattr(self, name), dtype=complex)
            if matrix.ndim != 2:
                raise DimensionMismatch(
                    f"{name} must be a matrix, got shape {matrix.shape}"
                )
            object.__setattr__(self, name, matrix)

        if self.dft.shape[0] != self.dft.shape[1]:
            raise DimensionMismatch(
                f"dft must be square, got shape {self.dft.shape}"
            )
        if self.idft.shape[0] < self.idft.shape[1]:
            raise DimensionMismatch(
                "idft can't synthesize {} modes from {} elements".format(
                    self.idft.shape[1], self.idft.shape[0]
                )
            )
        for name in ("idft", "dft"):
            if not is_unitary(getattr(self, name)):
                raise ValueError(f"{name} columns are not orthonormal")

    @property
    def num_modes(self) -> int:
        return self.idft.shape[1]

    @property
    def num_tx_elements(self) -> int:
        return self.idft.shape[0]

    @property
    def num_rx_elements(self) -> int:
        return self.dft.shape[0]


def make_pair(num_tx: int, num_rx: Optional[int] = None) -> UnitDftPair:
    num_rx = num_tx if num_rx is None else num_rx
    return UnitDftPair(unit_idft(num_tx), unit_dft(num_rx))
