from dataclasses import dataclass

import numpy as np

from talbot.channel.matrix import ChannelMatrix
from talbot.geometry import DimensionMismatch


@dataclass(frozen=True, eq=False)
class OamChannel:
    """
    Mode-domain channel `H' = W' H W`. With more receive than
    transmit modes only the leading square block is used for
    gains and interference, since detection reads the first
    `n_tx` demodulated outputs.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] < entries.shape[1]:
            raise DimensionMismatch(
                "Mode-domain channel needs at least as many rows as "
                "columns, got shape {}".format(entries.shape)
            )
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def num_modes(self) -> int:
        return self.entries.shape[1]

    @property
    def block(self) -> np.ndarray:
        n = self.num_modes
        return self.entries[:n, :n]

    @property
    def gains(self) -> np.ndarray:
        """Per-mode gains `h'_l`, the diagonal of `block`"""
        return np.diag(self.block).copy()

    @property
    def interference(self) -> np.ndarray:
        """`block` with its diagonal zeroed"""
        block = self.block.copy()
        np.fill_diagonal(block, 0)
        return block


def to_oam_domain(
    h: ChannelMatrix, w_tx: np.ndarray, w_rx: np.ndarray
) -> OamChannel:
    """
    Args:
        h:
            Element-domain channel of shape `(n_rx, n_tx)`
        w_tx:
            Synthesis matrix with `n_tx` rows, one column per mode
        w_rx:
            Square analysis DFT over the `n_rx` receive elements
    """
    w_tx, w_rx = np.asarray(w_tx), np.asarray(w_rx)
    if w_rx.ndim != 2 or w_rx.shape != (h.n_rx, h.n_rx):
        raise DimensionMismatch(
            "Receive transform of shape {} doesn't match {} elements".format(
                w_rx.shape, h.n_rx
            )
        )
    if w_tx.ndim != 2 or w_tx.shape[0] != h.n_tx:
        raise DimensionMismatch(
            "Transmit transform of shape {} doesn't match {} "
            "elements".format(w_tx.shape, h.n_tx)
        )
    if h.n_rx < w_tx.shape[1]:
        raise DimensionMismatch(
            "Can't separate {} modes with {} receive elements".format(
                w_tx.shape[1], h.n_rx
            )
        )
    return OamChannel(w_rx @ h.entries @ w_tx)
