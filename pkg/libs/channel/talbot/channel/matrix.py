from dataclasses import dataclass
from typing import Tuple

import numpy as np

from talbot.field import Layout, element_response
from talbot.geometry import UcaLayout

EXACT = "analytic-exact"
APPROX = "analytic-approx"
INGESTED = "ingested"
PROVENANCES = (EXACT, APPROX, INGESTED)

VARIANTS = {"exact": EXACT, "approx": APPROX}


class MalformedInput(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """
    Narrowband channel from `n_tx` transmit elements to
    `n_rx` receive elements, `r = H s`.

    Args:
        entries:
            Complex matrix of shape `(n_rx, n_tx)`
        provenance:
            Where the entries came from, one of `PROVENANCES`
    """

    entries: np.ndarray
    provenance: str = EXACT

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(
                "Unknown channel provenance '{}', expected one of {}".format(
                    self.provenance, ", ".join(PROVENANCES)
                )
            )

        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.size == 0:
            raise MalformedInput(
                "Channel entries must form a non-empty matrix, "
                "got shape {}".format(entries.shape)
            )
        if not np.isfinite(entries).all():
            raise MalformedInput("Channel entries must all be finite")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def n_rx(self) -> int:
        return self.entries.shape[0]

    @property
    def n_tx(self) -> int:
        return self.entries.shape[1]


def build_free_space(
    tx: Layout,
    rx: UcaLayout,
    wavelength: float = 1.0,
    variant: str = "exact",
) -> ChannelMatrix:
    """
    Free-space channel between every pair of transmit and
    receive elements. Entry `(n_r, n_t)` is the field that a unit
    excitation of transmit element `n_t` produces at receive
    element `n_r`, so the exact variant agrees with the field
    evaluation of one-hot excitations.

    Args:
        tx:
            Transmit array, single or composite
        rx:
            Receive array, which must lie beyond the transmit plane
        wavelength:
            Carrier wavelength in the units of the layouts
        variant:
            `"exact"` for spherical-wave entries or `"approx"`
            for the paraxial, constant-amplitude form

    Returns:
        Matrix of shape `(rx.element_count, tx.element_count)`
    """
    try:
        provenance = VARIANTS[variant]
    except KeyError:
        raise ValueError(
            "Unknown channel variant '{}', expected one of {}".format(
                variant, ", ".join(VARIANTS)
            )
        ) from None

    entries = element_response(
        tx.positions,
        rx.positions,
        wavelength,
        approximate=variant == "approx",
    )
    return ChannelMatrix(entries, provenance)


def ingest_channel(data) -> ChannelMatrix:
    """
    Wrap externally measured or simulated channel values, e.g.
    the transmission block of an S-parameter matrix, so that they
    can be used wherever an analytic channel can.
    """
    try:
        entries = np.array(data, dtype=complex)
    except (TypeError, ValueError) as e:
        raise MalformedInput(f"Can't read channel values: {e}") from None
    if entries.ndim != 2:
        raise MalformedInput(
            "Channel values must be rectangular, got {} dimensions".format(
                entries.ndim
            )
        )
    return ChannelMatrix(entries, INGESTED)
