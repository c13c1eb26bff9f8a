"""
The `fractal` command. Each subcommand is its own typeo
script, and `cli_main` dispatches on the first argument:

```
fractal grid --transmit-radius 30 --distance 75
fractal link --config prototype.toml --grid-index 1,1
fractal sweep --config prototype.toml --param snr --values 0:2:30
```

Length flags are read in the config's units. Domain errors
exit with code 1 and usage errors with code 2.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from typeo import scriptify

from harness import __version__
from harness.config import (
    ExperimentConfig,
    SweepConfig,
    config_hash,
    load_config,
    load_document,
    parse_grid,
)
from harness.experiment import build_link, build_transmit, run_link
from harness.formats import (
    export_channel_csv,
    export_field_map,
    format_curve_csv,
    import_channel_csv,
    write_curve_csv,
)
from harness.ledger import CurveTable
from harness.sweep import SweepSpec, result_row, run_sweep
from talbot.field import (
    MapSpec,
    locate_nulls,
    mode_excitation,
    render_field_map,
)
from talbot.geometry import enumerate_centers
from talbot.logging import configure_logging

# receive plane half width of a field map, in lattice scales
MAP_SCALES = 3.0


def _overrides(**kwargs):
    # flags that weren't passed shouldn't clobber the config
    if kwargs.get("receive.allow_oversize") is False:
        kwargs["receive.allow_oversize"] = None
    if kwargs.get("link.snr_db") is not None:
        kwargs["link.snr_db"] = [kwargs["link.snr_db"]]
    return kwargs


def _log_config(config: ExperimentConfig) -> None:
    logging.info(
        "Config {} with seed {}: {} transmitter of radius {} at {}".format(
            config_hash(config),
            config.seed,
            config.transmit.baseline,
            config.wavelength.format(config.transmit.element_radius),
            config.wavelength.format(config.distance),
        )
    )


def _emit(table: CurveTable, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(format_curve_csv(table))
    elif output.suffix in (".h5", ".hdf5"):
        table.write(output)
        logging.info(f"Wrote {len(table)} rows to {output}")
    else:
        write_curve_csv(table, output)


def _single_row(config: ExperimentConfig, result) -> CurveTable:
    row = result_row(config, result, result.snr_db)
    return CurveTable.from_rows(
        [row],
        parameter="snr",
        config_hash=config_hash(config),
        seed=config.seed,
        version=__version__,
        wavelength="{:g} {}".format(
            config.wavelength.value, config.wavelength.units
        ),
    )


@scriptify
def grid(
    config: Optional[Path] = None,
    units: Optional[str] = None,
    wavelength: Optional[float] = None,
    transmit_radius: Optional[float] = None,
    distance: Optional[float] = None,
    centers: int = 1,
    precision: int = 2,
    verbose: bool = False,
) -> None:
    """
    Print the fractal grid of a transmit array

    Args:
        config:
            TOML config to start from
        units:
            Length units of the config and flags
        wavelength:
            Carrier wavelength
        transmit_radius:
            Radius of the transmit UCA
        distance:
            Distance to the receive plane
        centers:
            Print the centers with `|m|` and `|n|` up to this
        precision:
            Decimal places to print lengths with
        verbose:
            Log at debug level
    """
    configure_logging(verbose=verbose)
    document = load_document(
        config,
        {
            "units": units,
            "wavelength": wavelength,
            "transmit.radius": transmit_radius,
            "distance": distance,
        },
    )
    carrier, fractal = parse_grid(document)
    if fractal is None:
        print("no fractal grid below half a wavelength of radius")
        return

    for name in ("scale", "cell_radius", "pitch", "rr_bound"):
        length = getattr(fractal, name)
        print(f"{name} {carrier.format(length, precision)}")

    for idx, center in enumerate_centers(fractal, centers, centers):
        x, y = (carrier.format(i, precision) for i in center[:2])
        print(f"center {idx} {x} {y}")


@scriptify
def fieldmap(
    output_dir: Path,
    config: Optional[Path] = None,
    mode: int = 1,
    pixels: int = 201,
    half_width: Optional[float] = None,
    distance: Optional[float] = None,
    transmit_radius: Optional[float] = None,
    approximate: bool = False,
    allow_oversize_rx: bool = False,
    verbose: bool = False,
) -> None:
    """
    Raster the field of one transmitted mode over the
    receive plane, writing `fieldmap.csv` and `fieldmap.pgm`

    Args:
        output_dir:
            Directory to write the map to
        config:
            TOML config to start from
        mode:
            OAM mode to excite
        pixels:
            Pixels along each side of the square map
        half_width:
            Half width of the map. Defaults to three lattice
            scales, or 20 wavelengths without a fractal grid.
        distance:
            Distance to the receive plane
        transmit_radius:
            Radius of the transmit UCA
        approximate:
            Raster the paraxial field instead of the exact one
        allow_oversize_rx:
            Accept a receive radius above the fractal bound
        verbose:
            Log at debug level
    """
    configure_logging(verbose=verbose)
    config = load_config(
        config,
        _overrides(
            distance=distance,
            **{
                "transmit.radius": transmit_radius,
                "receive.allow_oversize": allow_oversize_rx,
            },
        ),
    )
    _log_config(config)

    if half_width is None:
        width = 20.0
        if config.grid is not None:
            width = MAP_SCALES * config.grid.scale
    else:
        width = config.wavelength.to_wavelengths(half_width)
    spec = MapSpec.square(config.distance, width, pixels)

    layout = build_transmit(config)
    if config.transmit.baseline == "two-layer":
        excitation = layout.mode_excitation(mode)
    else:
        excitation = mode_excitation(config.transmit.elements, mode)

    logging.info(
        "Rendering mode {} over {} pixels at z = {}".format(
            mode, pixels**2, config.wavelength.format(config.distance)
        )
    )
    field_map = render_field_map(
        layout, excitation, spec, approximate=approximate
    )
    nulls = locate_nulls(field_map)
    logging.info(f"Found {len(nulls)} nulls in the map")

    output_dir.mkdir(parents=True, exist_ok=True)
    export_field_map(
        field_map,
        output_dir / "fieldmap.csv",
        output_dir / "fieldmap.pgm",
        config_hash=config_hash(config),
        seed=config.seed,
    )


@scriptify
def link(
    config: Optional[Path] = None,
    snr_db: Optional[float] = None,
    trials: Optional[int] = None,
    variant: Optional[str] = None,
    distance: Optional[float] = None,
    transmit_radius: Optional[float] = None,
    receive_radius: Optional[float] = None,
    grid_index: Optional[str] = None,
    baseline: Optional[str] = None,
    seed: Optional[int] = None,
    allow_oversize_rx: bool = False,
    export_channel: Optional[Path] = None,
    output: Optional[Path] = None,
    verbose: bool = False,
) -> None:
    """
    Evaluate a single link and print its row of results

    Args:
        config:
            TOML config to start from
        snr_db:
            SNR to evaluate at
        trials:
            Monte Carlo symbol vectors to simulate, 0 to skip
        variant:
            Channel model, `exact` or `approx`
        distance:
            Distance to the receive plane
        transmit_radius:
            Radius of the transmit UCA
        receive_radius:
            Radius of the receive UCA
        grid_index:
            Fractal center to place the receiver at, as `m,n`
        baseline:
            Transmitter, one of `fractal`, `normal` or `two-layer`
        seed:
            Seed of the Monte Carlo streams
        allow_oversize_rx:
            Accept a receive radius above the fractal bound
        export_channel:
            Write the channel matrix to this CSV
        output:
            Write results here instead of stdout. A `.h5`
            suffix writes an HDF5 archive.
        verbose:
            Log at debug level
    """
    configure_logging(verbose=verbose)
    config = load_config(
        config,
        _overrides(
            distance=distance,
            seed=seed,
            **{
                "link.snr_db": snr_db,
                "link.trials": trials,
                "link.variant": variant,
                "transmit.radius": transmit_radius,
                "transmit.baseline": baseline,
                "receive.radius": receive_radius,
                "receive.grid_index": grid_index,
                "receive.allow_oversize": allow_oversize_rx,
            },
        ),
    )
    _log_config(config)

    if export_channel is not None:
        channel = build_link(config, config.link.snr_db[0]).channel
        export_channel_csv(
            channel, export_channel, config_hash(config), config.seed
        )
    result = run_link(config)
    _emit(_single_row(config, result), output)


@scriptify
def sweep(
    config: Optional[Path] = None,
    param: Optional[str] = None,
    values: Optional[str] = None,
    tie_receive_radius: Optional[float] = None,
    snr_db: Optional[float] = None,
    trials: Optional[int] = None,
    baseline: Optional[str] = None,
    grid_index: Optional[str] = None,
    allow_oversize_rx: bool = False,
    output: Optional[Path] = None,
    verbose: bool = False,
) -> None:
    """
    Evaluate a link over a sweep of one parameter. The number
    of worker processes is read from `FRACTAL_MAX_WORKERS`.

    Args:
        config:
            TOML config to start from
        param:
            Swept parameter, one of `snr`, `receive_radius`,
            `transmit_radius`, `distance` or `grid_index`
        values:
            Values to sweep, as `start:step:stop` or a list.
            Lengths are in the config's units.
        tie_receive_radius:
            Tie the receive radius of every point to this
            fraction of `lambda * z / R_t`
        snr_db:
            SNR of sweeps over anything but SNR
        trials:
            Monte Carlo symbol vectors per point, 0 to skip
        baseline:
            Transmitter, one of `fractal`, `normal` or `two-layer`
        grid_index:
            Fractal center of sweeps over anything but the
            grid index, as `m,n`
        allow_oversize_rx:
            Accept a receive radius above the fractal bound
        output:
            Write results here instead of stdout. A `.h5`
            suffix writes an HDF5 archive.
        verbose:
            Log at debug level
    """
    configure_logging(verbose=verbose)
    config = load_config(
        config,
        _overrides(
            **{
                "sweep.parameter": param,
                "sweep.values": values,
                "sweep.tie_receive_radius": tie_receive_radius,
                "link.snr_db": snr_db,
                "link.trials": trials,
                "transmit.baseline": baseline,
                "receive.grid_index": grid_index,
                "receive.allow_oversize": allow_oversize_rx,
            },
        ),
    )
    _log_config(config)
    spec = SweepSpec.from_config(
        config.sweep or SweepConfig(), config.wavelength
    )
    table = run_sweep(config, spec)
    _emit(table, output)


@scriptify
def ingest_channel(
    channel: Path,
    config: Optional[Path] = None,
    snr_db: Optional[float] = None,
    trials: Optional[int] = None,
    output: Optional[Path] = None,
    verbose: bool = False,
) -> None:
    """
    Evaluate a link over a channel matrix read from CSV
    instead of the free-space model

    Args:
        channel:
            CSV of `nr,nt,re,im` rows
        config:
            TOML config providing the SNR and seed
        snr_db:
            SNR to evaluate at
        trials:
            Monte Carlo symbol vectors to simulate, 0 to skip
        output:
            Write results here instead of stdout
        verbose:
            Log at debug level
    """
    configure_logging(verbose=verbose)
    config = load_config(
        config,
        _overrides(**{"link.snr_db": snr_db, "link.trials": trials}),
    )
    _log_config(config)
    matrix = import_channel_csv(channel)
    result = run_link(config, channel=matrix)
    _emit(_single_row(config, result), output)


COMMANDS = {
    "grid": grid,
    "fieldmap": fieldmap,
    "link": link,
    "sweep": sweep,
    "ingest-channel": ingest_channel,
}


def cli_main(argv=None) -> int:
    """
    Run a subcommand and return its exit code instead
    of exiting
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        command = argv[0] if argv else ""
        sys.stderr.write(
            "usage: fractal {{{}}} [options]\n".format(",".join(COMMANDS))
        )
        if command:
            sys.stderr.write(f"fractal: unknown command {command!r}\n")
        return 2

    command, *args = argv
    saved = sys.argv
    sys.argv = [f"fractal {command}", *args]
    try:
        COMMANDS[command]()
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    except (ValueError, OSError) as e:
        logging.error(str(e))
        return 1
    finally:
        sys.argv = saved
    return 0


def main():
    sys.exit(cli_main())
