from .dft import UnitDftPair, is_unitary, make_pair, unit_dft, unit_idft
from .link import ZeroGain, demodulate, detect, propagate, transmit
from .signals import (
    BPSK,
    CONSTELLATIONS,
    GAUSSIAN,
    NoiseSpec,
    PowerAllocation,
    SymbolVector,
)
from .streams import NOISE, SYMBOLS, stream
