"""
Text formats written and read by the harness. Every file
starts with `# key=value` comment lines carrying the config
hash and seed it was produced from, and floats are written
with enough digits to round-trip exactly.
"""

import logging
import os
import textwrap
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from harness import __version__
from harness.ledger import CurveTable
from talbot.channel import INGESTED, ChannelMatrix, MalformedInput
from talbot.field import FieldMap, MapSpec

PATH = Union[str, os.PathLike]

FLOAT_FORMAT = "%.17g"
FIELD_COLUMNS = ("x", "y", "re", "im", "power_db", "phase")
CHANNEL_COLUMNS = ("nr", "nt", "re", "im")
PGM_WIDTH = 70


def _format(value: float) -> str:
    return FLOAT_FORMAT % value


def _header(**items) -> List[str]:
    return [f"# {k}={v}" for k, v in items.items() if v is not None]


def read_header(lines: List[str]) -> Tuple[Dict[str, str], List[str]]:
    """Split leading `# key=value` lines from the rest of a file"""
    metadata, body = {}, []
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body = lines[i:]
            break
        key, _, value = line[1:].strip().partition("=")
        metadata[key.strip()] = value.strip()
    return metadata, body


def format_curve_csv(table: CurveTable) -> str:
    lines = _header(
        config_hash=table.config_hash,
        seed=table.seed,
        version=table.version,
        parameter=table.parameter,
        wavelength=table.wavelength,
    )
    lines.append(",".join(table.names))
    for row in table.to_array():
        lines.append(",".join(_format(i) for i in row))
    return "\n".join(lines) + "\n"


def write_curve_csv(table: CurveTable, fname: PATH) -> None:
    Path(fname).write_text(format_curve_csv(table))
    logging.info(f"Wrote {len(table)} rows to {fname}")


def read_curve_csv(
    fname: PATH,
) -> Tuple[Dict[str, str], Dict[str, np.ndarray]]:
    """
    Read a curve CSV back as its header metadata and a mapping
    from column name to values
    """
    metadata, body = read_header(Path(fname).read_text().splitlines())
    if not body:
        raise MalformedInput(f"{fname}: no column header")
    names = body[0].split(",")
    data = np.loadtxt(body[1:], delimiter=",", ndmin=2)
    data = data.reshape(-1, len(names))
    return metadata, {name: data[:, i] for i, name in enumerate(names)}


def format_field_csv(
    field_map: FieldMap,
    config_hash: Optional[str] = None,
    seed: Optional[int] = None,
) -> str:
    spec = field_map.spec
    lines = _header(
        config_hash=config_hash,
        seed=seed,
        version=__version__,
        z=_format(spec.z),
        x_range=",".join(_format(i) for i in spec.x_range),
        y_range=",".join(_format(i) for i in spec.y_range),
        nx=spec.nx,
        ny=spec.ny,
    )
    lines.append(",".join(FIELD_COLUMNS))

    power_db, phase = field_map.power_db(), field_map.phase
    for iy, y in enumerate(spec.y):
        for ix, x in enumerate(spec.x):
            sample = field_map.samples[iy, ix]
            values = (
                x,
                y,
                sample.real,
                sample.imag,
                power_db[iy, ix],
                phase[iy, ix],
            )
            lines.append(",".join(_format(i) for i in values))
    return "\n".join(lines) + "\n"


def format_field_pgm(
    field_map: FieldMap,
    config_hash: Optional[str] = None,
    seed: Optional[int] = None,
) -> str:
    """
    Plain 8-bit PGM of the normalized power, with the first
    image row at the largest y
    """
    spec = field_map.spec
    pixels = np.rint(255 * field_map.normalized_power).astype(int)
    pixels = np.clip(pixels, 0, 255)[::-1]

    lines = ["P2", f"# config_hash={config_hash} seed={seed}"]
    lines += [f"{spec.nx} {spec.ny}", "255"]
    for row in pixels:
        text = " ".join(str(i) for i in row)
        lines.extend(textwrap.wrap(text, width=PGM_WIDTH))
    return "\n".join(lines) + "\n"


def export_field_map(
    field_map: FieldMap,
    csv_path: Optional[PATH] = None,
    pgm_path: Optional[PATH] = None,
    config_hash: Optional[str] = None,
    seed: Optional[int] = None,
) -> None:
    if csv_path is not None:
        text = format_field_csv(field_map, config_hash, seed)
        Path(csv_path).write_text(text)
        logging.info(f"Wrote field map samples to {csv_path}")
    if pgm_path is not None:
        text = format_field_pgm(field_map, config_hash, seed)
        Path(pgm_path).write_text(text)
        logging.info(f"Wrote field map image to {pgm_path}")


def _range(metadata: Dict[str, str], key: str) -> Tuple[float, float]:
    low, high = metadata[key].split(",")
    return float(low), float(high)


def read_field_map_csv(fname: PATH) -> FieldMap:
    """Rebuild a `FieldMap` from the CSV written by `export_field_map`"""
    metadata, body = read_header(Path(fname).read_text().splitlines())
    try:
        spec = MapSpec(
            float(metadata["z"]),
            _range(metadata, "x_range"),
            _range(metadata, "y_range"),
            int(metadata["nx"]),
            int(metadata["ny"]),
        )
    except (KeyError, ValueError) as e:
        raise MalformedInput(f"{fname}: bad raster header: {e}") from None

    if not body or tuple(body[0].split(",")) != FIELD_COLUMNS:
        raise MalformedInput(
            "{}: expected columns {}".format(fname, ",".join(FIELD_COLUMNS))
        )
    data = np.loadtxt(body[1:], delimiter=",", ndmin=2)
    if data.shape != (spec.nx * spec.ny, len(FIELD_COLUMNS)):
        raise MalformedInput(
            "{}: expected {} samples, got {}".format(
                fname, spec.nx * spec.ny, len(data)
            )
        )
    samples = (data[:, 2] + 1j * data[:, 3]).reshape(spec.ny, spec.nx)
    return FieldMap(spec, samples)


def export_channel_csv(
    channel: ChannelMatrix,
    fname: PATH,
    config_hash: Optional[str] = None,
    seed: Optional[int] = None,
) -> None:
    lines = _header(
        config_hash=config_hash,
        seed=seed,
        version=__version__,
        provenance=channel.provenance,
    )
    lines.append(",".join(CHANNEL_COLUMNS))
    for (nr, nt), value in np.ndenumerate(channel.entries):
        re, im = _format(value.real), _format(value.imag)
        lines.append(f"{nr},{nt},{re},{im}")
    Path(fname).write_text("\n".join(lines) + "\n")
    logging.info(
        "Wrote {}x{} channel to {}".format(channel.n_rx, channel.n_tx, fname)
    )


def _parse_channel_line(line: str, lineno: int) -> Tuple[int, int, complex]:
    fields = [i.strip() for i in line.split(",")]
    if len(fields) != len(CHANNEL_COLUMNS):
        raise MalformedInput(
            "line {}: expected {} fields, got {}".format(
                lineno, len(CHANNEL_COLUMNS), len(fields)
            )
        )
    try:
        nr, nt = int(fields[0]), int(fields[1])
    except ValueError:
        raise MalformedInput(
            f"line {lineno}: element indices must be integers"
        ) from None
    if nr < 0 or nt < 0:
        raise MalformedInput(
            f"line {lineno}: element indices must be non-negative"
        )
    try:
        value = complex(float(fields[2]), float(fields[3]))
    except ValueError:
        raise MalformedInput(
            f"line {lineno}: can't parse entry {fields[2]},{fields[3]}"
        ) from None
    if not np.isfinite(value):
        raise MalformedInput(f"line {lineno}: entry is not finite")
    return nr, nt, value


def import_channel_csv(fname: PATH) -> ChannelMatrix:
    """
    Read a channel matrix from `nr,nt,re,im` rows. Comment
    lines starting with `#` and blank lines are skipped, and
    every entry of the dense matrix must appear exactly once.
    """
    entries = {}
    header_seen = False
    lines = Path(fname).read_text().splitlines()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            columns = tuple(i.strip() for i in line.split(","))
            if columns != CHANNEL_COLUMNS:
                raise MalformedInput(
                    "line {}: expected header {}".format(
                        lineno, ",".join(CHANNEL_COLUMNS)
                    )
                )
            header_seen = True
            continue

        nr, nt, value = _parse_channel_line(line, lineno)
        if (nr, nt) in entries:
            raise MalformedInput(
                f"line {lineno}: duplicate entry for nr={nr}, nt={nt}"
            )
        entries[nr, nt] = value

    if not entries:
        raise MalformedInput(f"{fname}: no channel entries")

    n_rx = max(nr for nr, _ in entries) + 1
    n_tx = max(nt for _, nt in entries) + 1
    matrix = np.zeros((n_rx, n_tx), dtype=complex)
    missing = []
    for nr in range(n_rx):
        for nt in range(n_tx):
            if (nr, nt) in entries:
                matrix[nr, nt] = entries[nr, nt]
            else:
                missing.append((nr, nt))
    if missing:
        nr, nt = missing[0]
        raise MalformedInput(
            "{}: {} missing entries, first at nr={}, nt={}".format(
                fname, len(missing), nr, nt
            )
        )
    logging.info(f"Read {n_rx}x{n_tx} channel from {fname}")
    return ChannelMatrix(matrix, provenance=INGESTED)
