import logging
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from harness import __version__
from harness.config import (
    SWEEP_PARAMETERS,
    ConfigError,
    ExperimentConfig,
    SweepConfig,
    config_hash,
)
from harness.experiment import run_link
from harness.ledger import CurveTable
from talbot.geometry import GridIndex, Wavelength
from talbot.metrics import LinkResult

WORKERS_ENV = "FRACTAL_MAX_WORKERS"
LENGTH_PARAMETERS = ("receive_radius", "transmit_radius", "distance")


def max_workers() -> int:
    """
    Worker processes for sweeps, read from `FRACTAL_MAX_WORKERS`
    and defaulting to the number of CPUs
    """
    value = os.environ.get(WORKERS_ENV)
    if value is None:
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError:
        raise ConfigError(
            f"{WORKERS_ENV}: expected an integer, got {value!r}"
        ) from None
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV}: must be at least 1, got {workers}")
    return workers


def _range(text: str) -> List[float]:
    try:
        start, step, stop = (float(i) for i in text.split(":"))
    except ValueError:
        raise ConfigError(
            f"sweep.values: can't parse range {text!r}, "
            "expected start:step:stop"
        ) from None
    if step == 0 or (stop - start) * step < 0:
        raise ConfigError(
            f"sweep.values: step {step} never reaches {stop} from {start}"
        )
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [start + i * step for i in range(count)]


def parse_values(text: str, parameter: str) -> List[Any]:
    """
    Parse the values of a sweep. Numbers are either an inclusive
    `start:step:stop` range or a list separated by `,` or `;`.
    Grid indices are `m,n` tokens separated by `;` or whitespace.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(
            "sweep.parameter: unknown parameter {!r}, expected one "
            "of {}".format(parameter, ", ".join(SWEEP_PARAMETERS))
        )

    if parameter == "grid_index":
        tokens = [i for i in re.split(r"[;\s]+", text.strip()) if i]
        try:
            values = [GridIndex.parse(i) for i in tokens]
        except ValueError as e:
            raise ConfigError(f"sweep.values: {e}") from None
    elif text.count(":") == 2:
        values = _range(text.strip())
    else:
        tokens = [i for i in re.split(r"[,;]", text) if i.strip()]
        try:
            values = [float(i) for i in tokens]
        except ValueError:
            raise ConfigError(
                f"sweep.values: can't parse numbers from {text!r}"
            ) from None

    if not values:
        raise ConfigError("sweep.values: needs at least one value")
    return values


@dataclass(frozen=True)
class SweepSpec:
    """
    A parsed sweep whose length values are in wavelengths

    Args:
        parameter:
            Swept quantity, one of `SWEEP_PARAMETERS`
        values:
            Values to evaluate, in order
        tie_receive_radius:
            If set, every point uses the receive radius
            `tie_receive_radius * z / R_t`
    """

    parameter: str
    values: Tuple[Any, ...]
    tie_receive_radius: Optional[float] = None

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(
                f"sweep.parameter: unknown parameter {self.parameter!r}"
            )
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ConfigError("sweep.values: needs at least one value")
        if self.parameter in LENGTH_PARAMETERS:
            for value in self.values:
                if not value > 0:
                    raise ConfigError(
                        "sweep.values: {} must be positive, got {}".format(
                            self.parameter, value
                        )
                    )

    @classmethod
    def from_config(
        cls, sweep: SweepConfig, wavelength: Wavelength
    ) -> "SweepSpec":
        values = parse_values(sweep.values, sweep.parameter)
        if sweep.parameter in LENGTH_PARAMETERS:
            values = [wavelength.to_wavelengths(i) for i in values]
        return cls(sweep.parameter, values, sweep.tie_receive_radius)

    def __len__(self):
        return len(self.values)


def point_config(
    config: ExperimentConfig, sweep: SweepSpec, value: Any
) -> Tuple[ExperimentConfig, float]:
    """
    The config and SNR of one sweep point. Sweeps over anything
    but SNR are evaluated at the first configured SNR.
    """
    snr_db = config.link.snr_db[0]
    transmit, receive = config.transmit, config.receive
    distance = config.distance

    if sweep.parameter == "snr":
        snr_db = float(value)
    elif sweep.parameter == "receive_radius":
        receive = replace(receive, radius=value)
    elif sweep.parameter == "transmit_radius":
        transmit = replace(transmit, radius=value)
    elif sweep.parameter == "distance":
        distance = value
    else:
        receive = replace(receive, grid_index=value, center=None)

    if sweep.tie_receive_radius is not None:
        radius = sweep.tie_receive_radius * distance / transmit.radius
        receive = replace(receive, radius=radius)

    config = replace(
        config, transmit=transmit, receive=receive, distance=distance
    )
    return config, snr_db


def result_row(
    config: ExperimentConfig, result: LinkResult, value: float
) -> Dict[str, Any]:
    """One `CurveTable` row for an evaluated link"""
    if config.receive.center is None:
        m = config.receive.grid_index.m
        n = config.receive.grid_index.n
    else:
        m = n = np.nan

    if result.monte_carlo is None:
        ber_mc = stderr = np.nan
    else:
        ber_mc = result.monte_carlo.probability
        stderr = result.monte_carlo.stderr

    return {
        "value": value,
        "grid_m": m,
        "grid_n": n,
        "snr_db": result.snr_db,
        "transmit_radius": config.transmit.radius,
        "receive_radius": config.receive.radius,
        "distance": config.distance,
        "sinr": result.sinr,
        "capacity": result.capacity,
        "ber_analytic": result.ber_analytic,
        "ber_mc": ber_mc,
        "ber_mc_stderr": stderr,
    }


def run_point(
    config: ExperimentConfig, sweep: SweepSpec, index: int
) -> Dict[str, Any]:
    value = sweep.values[index]
    point, snr_db = point_config(config, sweep, value)
    result = run_link(point, snr_db)

    # grid points are numbered in sweep order
    if sweep.parameter == "grid_index":
        value = index
    return result_row(point, result, float(value))


def run_sweep(
    config: ExperimentConfig,
    sweep: Optional[SweepSpec] = None,
    num_workers: Optional[int] = None,
) -> CurveTable:
    """
    Evaluate a link at every point of a sweep.

    Points are farmed out to a process pool, but rows come
    back in sweep order and Monte Carlo streams depend only
    on the config seed, so results don't depend on the
    number of workers.

    Args:
        config:
            The experiment to sweep over
        sweep:
            Points to evaluate. Defaults to the config's own
            sweep table.
        num_workers:
            Processes to use. Defaults to `max_workers()`.

    Returns:
        One table row per sweep value
    """
    if sweep is None:
        if config.sweep is None:
            raise ConfigError("sweep: config has no sweep table")
        sweep = SweepSpec.from_config(config.sweep, config.wavelength)
    num_workers = num_workers or max_workers()

    metadata = dict(
        parameter=sweep.parameter,
        config_hash=config_hash(config),
        seed=config.seed,
        version=__version__,
        wavelength="{:g} {}".format(
            config.wavelength.value, config.wavelength.units
        ),
    )

    # keep the noise floor where the base config put it as
    # the distance moves
    if config.link.reference_distance is None:
        link = replace(config.link, reference_distance=config.distance)
        config = replace(config, link=link)

    num_points = len(sweep)
    logging.info(
        "Sweeping {} over {} points with {} workers".format(
            sweep.parameter, num_points, min(num_workers, num_points)
        )
    )

    rows = [None] * num_points
    if num_workers == 1 or num_points == 1:
        for i in tqdm(range(num_points), disable=None):
            rows[i] = run_point(config, sweep, i)
    else:
        with ProcessPoolExecutor(min(num_workers, num_points)) as ex:
            futures = {
                ex.submit(run_point, config, sweep, i): i
                for i in range(num_points)
            }
            for future in tqdm(
                as_completed(futures), total=num_points, disable=None
            ):
                rows[futures[future]] = future.result()
    return CurveTable.from_rows(rows, **metadata)
