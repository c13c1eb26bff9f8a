from .monte_carlo import BLOCK_SIZE, Link, MonteCarloEstimate, ber_monte_carlo
from .performance import (
    NUM_MODES,
    ModeCountMismatch,
    ber_analytic,
    ber_per_mode,
    capacity,
    erfc,
    sinr,
)
from .result import LinkResult, evaluate_link
