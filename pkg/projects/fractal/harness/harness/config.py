"""
Experiment configuration. Configs are TOML documents whose
lengths are written in the document's `units`; everything is
converted to wavelengths on load, and the `Wavelength` kept on
the config is only used to print lengths back out.

```toml
units = "mm"
wavelength = 10.0
distance = 10000.0
seed = 0

[transmit]
radius = 1500.0
baseline = "fractal"

[receive]
radius = 16.7
grid_index = "2,2"

[link]
snr_db = [0, 10, 20, 30]

[sweep]
parameter = "receive_radius"
values = "1:1:25"
```
"""

import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import toml

from talbot.geometry import FractalGrid, GridIndex, Wavelength, make_grid
from talbot.geometry.units import UNITS
from talbot.modem import BPSK, CONSTELLATIONS

BASELINES = ("fractal", "normal", "two-layer")
VARIANTS = ("exact", "approx")
SNR_REFERENCES = ("free_space", "transmit")
SWEEP_PARAMETERS = (
    "snr",
    "receive_radius",
    "transmit_radius",
    "distance",
    "grid_index",
)

DEFAULT_UNITS = "mm"
DEFAULT_WAVELENGTH = 10.0

# radius of the conventional OAM transmitter, in wavelengths
NORMAL_RADIUS = 0.5

# receive radius of configs that leave it out, in wavelengths
DEFAULT_RECEIVE_RADIUS = 1.67


class ConfigError(ValueError):
    pass


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def _number(path: str, value: Any, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        _fail(path, f"expected a finite number, got {value}")
    if integer:
        if int(value) != value:
            _fail(path, f"expected an integer, got {value}")
        return int(value)
    return float(value)


def _positive(path: str, value: float):
    if not value > 0:
        _fail(path, f"must be positive, got {value}")


def _choice(path: str, value: Any, choices: Tuple[str, ...]):
    if value not in choices:
        _fail(
            path,
            "expected one of {}, got {!r}".format(", ".join(choices), value),
        )


@dataclass(frozen=True)
class TransmitConfig:
    """
    Args:
        radius:
            Transmit UCA radius `R_t`. For the two-layer baseline
            this is the radius the sub-arrays are centered on.
        elements:
            Number of transmit elements `N_t`
        baseline:
            `"fractal"` uses `radius` as given, `"normal"` replaces
            it with half a wavelength and `"two-layer"` builds six
            sub-arrays of `inner_elements` elements each
        inner_radius:
            Sub-array radius of the two-layer baseline
        inner_elements:
            Sub-array element count of the two-layer baseline
    """

    radius: float = 150.0
    elements: int = 6
    baseline: str = "fractal"
    inner_radius: float = 0.5
    inner_elements: int = 6

    def __post_init__(self):
        _positive("transmit.radius", self.radius)
        _positive("transmit.inner_radius", self.inner_radius)
        for name in ("elements", "inner_elements"):
            if getattr(self, name) < 1:
                _fail(f"transmit.{name}", "must be at least 1")
        _choice("transmit.baseline", self.baseline, BASELINES)

    @property
    def num_modes(self) -> int:
        if self.baseline == "two-layer":
            return self.inner_elements
        return self.elements

    @property
    def element_radius(self) -> float:
        """Radius the transmit elements actually sit on"""
        if self.baseline == "normal":
            return NORMAL_RADIUS
        return self.radius


@dataclass(frozen=True)
class ReceiveConfig:
    """
    Receive UCA placement. The array is centered either on a
    fractal grid center, given by `grid_index`, or at an explicit
    `(x, y)` on the receive plane. Configs parsed without a
    radius get `default_receive_radius` of their grid.
    """

    radius: float = DEFAULT_RECEIVE_RADIUS
    elements: int = 6
    grid_index: GridIndex = GridIndex(0, 0)
    center: Optional[Tuple[float, float]] = None
    angular_offset: float = 0.0
    allow_oversize: bool = False

    def __post_init__(self):
        _positive("receive.radius", self.radius)
        if self.elements < 1:
            _fail("receive.elements", "must be at least 1")
        if self.center is not None:
            center = tuple(self.center)
            if len(center) != 2:
                _fail("receive.center", f"expected [x, y], got {center}")
            object.__setattr__(self, "center", center)


@dataclass(frozen=True)
class LinkConfig:
    """
    Args:
        variant:
            `"exact"` or `"approx"` channel entries
        powers:
            Transmit power of each mode in W. Defaults to 1 W
            on every mode.
        snr_db:
            SNRs to evaluate the link at
        snr_reference:
            What the SNR is measured against. `"free_space"`
            divides the per-mode power received over one
            element-to-element free-space hop at
            `reference_distance` by the noise, `"transmit"`
            divides the per-mode transmit power by the noise.
        reference_distance:
            Distance of the free-space reference hop, by default
            the experiment distance
        trials:
            Monte Carlo channel uses per SNR, 0 to skip simulation
        constellation:
            Symbol alphabet. Only BPSK can be simulated.
    """

    variant: str = "exact"
    powers: Optional[Tuple[float, ...]] = None
    snr_db: Tuple[float, ...] = (20.0,)
    snr_reference: str = "free_space"
    reference_distance: Optional[float] = None
    trials: int = 0
    constellation: str = BPSK

    def __post_init__(self):
        _choice("link.variant", self.variant, VARIANTS)
        _choice("link.snr_reference", self.snr_reference, SNR_REFERENCES)
        _choice("link.constellation", self.constellation, CONSTELLATIONS)

        if self.powers is not None:
            powers = tuple(self.powers)
            if any(p < 0 for p in powers) or not powers:
                _fail("link.powers", f"must be non-negative, got {powers}")
            object.__setattr__(self, "powers", powers)

        snr_db = tuple(self.snr_db)
        if not snr_db:
            _fail("link.snr_db", "needs at least one value")
        object.__setattr__(self, "snr_db", snr_db)

        if self.reference_distance is not None:
            _positive("link.reference_distance", self.reference_distance)
        if self.trials < 0:
            _fail("link.trials", f"must be non-negative, got {self.trials}")
        if self.trials and self.constellation != BPSK:
            _fail(
                "link.constellation",
                "Monte Carlo trials need BPSK symbols, got "
                f"{self.constellation!r}",
            )


@dataclass(frozen=True)
class SweepConfig:
    """
    Args:
        parameter:
            Swept quantity, one of `SWEEP_PARAMETERS`
        values:
            Either `start:step:stop` or a list of values. Grid
            indices are `m,n` tokens separated by `;`.
        tie_receive_radius:
            If set, every point uses the receive radius
            `tie_receive_radius * lambda * z / R_t`
    """

    parameter: str = "snr"
    values: str = "0:2:30"
    tie_receive_radius: Optional[float] = None

    def __post_init__(self):
        _choice("sweep.parameter", self.parameter, SWEEP_PARAMETERS)
        if not self.values.strip():
            _fail("sweep.values", "needs at least one value")
        if self.tie_receive_radius is not None:
            _positive("sweep.tie_receive_radius", self.tie_receive_radius)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A complete link experiment, with all lengths in wavelengths.
    Validation that spans sections happens here, including the
    check that the receive array fits inside one fractal cell.
    """

    wavelength: Wavelength = Wavelength(DEFAULT_WAVELENGTH, DEFAULT_UNITS)
    distance: float = 1000.0
    transmit: TransmitConfig = field(default_factory=TransmitConfig)
    receive: ReceiveConfig = field(default_factory=ReceiveConfig)
    link: LinkConfig = field(default_factory=LinkConfig)
    sweep: Optional[SweepConfig] = None
    seed: int = 0

    def __post_init__(self):
        _positive("distance", self.distance)
        if self.seed < 0:
            _fail("seed", f"must be non-negative, got {self.seed}")

        num_modes = self.transmit.num_modes
        if num_modes != 6:
            logging.warning(
                "Link carries {} modes. Fractal grid centers are only "
                "derived for six element arrays, whose replicas "
                "tessellate the receive plane".format(num_modes)
            )
        if self.receive.elements < num_modes:
            _fail(
                "receive.elements",
                "{} elements can't separate {} modes".format(
                    self.receive.elements, num_modes
                ),
            )
        powers = self.link.powers
        if powers is not None and len(powers) != num_modes:
            _fail(
                "link.powers",
                f"expected {num_modes} values, got {len(powers)}",
            )

        grid = _make_grid(self.transmit, self.distance)
        object.__setattr__(self, "_grid", grid)
        self._check_receiver(grid)

    def _check_receiver(self, grid: Optional[FractalGrid]):
        receive = self.receive
        if grid is None:
            if receive.center is None and receive.grid_index != GridIndex(
                0, 0
            ):
                _fail(
                    "receive.grid_index",
                    "a transmit radius of {} forms no fractal grid, "
                    "only 0,0 or an explicit center can be used".format(
                        self.transmit.radius
                    ),
                )
            logging.debug(
                "No fractal grid, skipping the receive radius bound"
            )
            return

        if receive.radius <= grid.rr_bound:
            return
        message = "receive radius {} exceeds the fractal bound {}".format(
            self.wavelength.format(receive.radius),
            self.wavelength.format(grid.rr_bound),
        )
        if not receive.allow_oversize:
            _fail("receive.radius", message)
        logging.warning(message.capitalize())

    @property
    def grid(self) -> Optional[FractalGrid]:
        """Fractal grid of the configured transmit radius"""
        return self._grid

    @property
    def num_modes(self) -> int:
        return self.transmit.num_modes

    @property
    def reference_distance(self) -> float:
        return self.link.reference_distance or self.distance


def config_hash(config: ExperimentConfig) -> str:
    """Digest of the resolved config, embedded in every output file"""
    document = json.dumps(asdict(config), sort_keys=True, default=str)
    return hashlib.sha256(document.encode()).hexdigest()[:16]


def _table(document: Any, path: str) -> Dict[str, Any]:
    if not isinstance(document, Mapping):
        _fail(path, f"expected a table, got {document!r}")
    return dict(document)


def _check_keys(document: Mapping, path: str, known: Tuple[str, ...]):
    for key in document:
        if key not in known:
            _fail(f"{path}.{key}" if path else key, "unknown field")


def _grid_index(path: str, value: Any) -> GridIndex:
    if isinstance(value, str):
        try:
            return GridIndex.parse(value)
        except ValueError as e:
            _fail(path, str(e))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        m, n = (_number(path, i, integer=True) for i in value)
        return GridIndex(m, n)
    _fail(path, f"expected 'm,n', got {value!r}")


def _numbers(path: str, value: Any) -> Tuple[float, ...]:
    if not isinstance(value, (list, tuple)):
        value = [value]
    return tuple(_number(f"{path}[{i}]", v) for i, v in enumerate(value))


def _parse_transmit(document: Any, wavelength: Wavelength):
    section = _table(document, "transmit")
    _check_keys(section, "transmit", tuple(TransmitConfig.__annotations__))

    kwargs = {}
    for name in ("radius", "inner_radius"):
        if name in section:
            value = _number(f"transmit.{name}", section[name])
            kwargs[name] = wavelength.to_wavelengths(value)
    for name in ("elements", "inner_elements"):
        if name in section:
            value = section[name]
            kwargs[name] = _number(f"transmit.{name}", value, integer=True)
    if "baseline" in section:
        kwargs["baseline"] = section["baseline"]
    return TransmitConfig(**kwargs)


def _parse_receive(document: Any, wavelength: Wavelength):
    section = _table(document, "receive")
    _check_keys(section, "receive", tuple(ReceiveConfig.__annotations__))

    kwargs = {}
    if "radius" in section:
        radius = _number("receive.radius", section["radius"])
        kwargs["radius"] = wavelength.to_wavelengths(radius)
    if "elements" in section:
        value = section["elements"]
        kwargs["elements"] = _number("receive.elements", value, integer=True)
    if "grid_index" in section and "center" in section:
        _fail("receive.center", "can't be combined with grid_index")
    if "grid_index" in section:
        value = section["grid_index"]
        kwargs["grid_index"] = _grid_index("receive.grid_index", value)
    if "center" in section:
        center = _numbers("receive.center", section["center"])
        center = tuple(wavelength.to_wavelengths(i) for i in center)
        kwargs["center"] = center
    if "angular_offset" in section:
        value = section["angular_offset"]
        kwargs["angular_offset"] = _number("receive.angular_offset", value)
    if "allow_oversize" in section:
        value = section["allow_oversize"]
        if not isinstance(value, bool):
            _fail("receive.allow_oversize", f"expected a bool, got {value}")
        kwargs["allow_oversize"] = value
    return ReceiveConfig(**kwargs)


def _parse_link(document: Any, wavelength: Wavelength):
    section = _table(document, "link")
    _check_keys(section, "link", tuple(LinkConfig.__annotations__))

    kwargs = {}
    for name in ("variant", "snr_reference", "constellation"):
        if name in section:
            kwargs[name] = section[name]
    for name in ("powers", "snr_db"):
        if name in section:
            kwargs[name] = _numbers(f"link.{name}", section[name])
    if "reference_distance" in section:
        value = section["reference_distance"]
        value = _number("link.reference_distance", value)
        kwargs["reference_distance"] = wavelength.to_wavelengths(value)
    if "trials" in section:
        value = section["trials"]
        kwargs["trials"] = _number("link.trials", value, integer=True)
    return LinkConfig(**kwargs)


def _parse_sweep(document: Any):
    section = _table(document, "sweep")
    _check_keys(section, "sweep", tuple(SweepConfig.__annotations__))

    kwargs = {}
    if "parameter" in section:
        kwargs["parameter"] = section["parameter"]
    if "values" in section:
        values = section["values"]
        if isinstance(values, (list, tuple)):
            separator = ";" if kwargs.get("parameter") == "grid_index" else ","
            values = separator.join(str(v) for v in values)
        elif not isinstance(values, str):
            _fail("sweep.values", f"expected a string or list, got {values}")
        kwargs["values"] = values
    if "tie_receive_radius" in section:
        value = section["tie_receive_radius"]
        value = _number("sweep.tie_receive_radius", value)
        kwargs["tie_receive_radius"] = value
    return SweepConfig(**kwargs)


SECTIONS = ("transmit", "receive", "link", "sweep")
TOP_LEVEL = ("units", "wavelength", "distance", "seed") + SECTIONS


def _parse_wavelength(document: Mapping[str, Any]) -> Wavelength:
    units = document.get("units", DEFAULT_UNITS)
    _choice("units", units, UNITS)
    default = 1.0 if units == "lambda" else DEFAULT_WAVELENGTH
    value = _number("wavelength", document.get("wavelength", default))
    try:
        return Wavelength(value, units)
    except ValueError as e:
        _fail("wavelength", str(e))


def _parse_distance(document: Mapping[str, Any], wavelength: Wavelength):
    distance = _number("distance", document["distance"])
    return wavelength.to_wavelengths(distance)


def _make_grid(transmit: TransmitConfig, distance: float):
    if transmit.radius <= NORMAL_RADIUS:
        return None
    return make_grid(1.0, transmit.radius, distance)


def default_receive_radius(grid: Optional[FractalGrid]) -> float:
    """
    `DEFAULT_RECEIVE_RADIUS`, shrunk to the fractal bound of
    grids whose cells are too small to hold it
    """
    if grid is None:
        return DEFAULT_RECEIVE_RADIUS
    return min(DEFAULT_RECEIVE_RADIUS, grid.rr_bound)


def parse_config(document: Mapping[str, Any]) -> ExperimentConfig:
    """Build a validated config from a parsed TOML document"""
    document = _table(document, "config")
    _check_keys(document, "", TOP_LEVEL)

    wavelength = _parse_wavelength(document)
    kwargs = {"wavelength": wavelength}
    if "distance" in document:
        kwargs["distance"] = _parse_distance(document, wavelength)
    if "seed" in document:
        kwargs["seed"] = _number("seed", document["seed"], integer=True)

    transmit = _parse_transmit(document.get("transmit", {}), wavelength)
    section = document.get("receive", {})
    receive = _parse_receive(section, wavelength)
    if "radius" not in section:
        distance = kwargs.get("distance", ExperimentConfig.distance)
        _positive("distance", distance)
        grid = _make_grid(transmit, distance)
        receive = replace(receive, radius=default_receive_radius(grid))

    kwargs["transmit"] = transmit
    kwargs["receive"] = receive
    kwargs["link"] = _parse_link(document.get("link", {}), wavelength)
    if "sweep" in document:
        kwargs["sweep"] = _parse_sweep(document["sweep"])
    return ExperimentConfig(**kwargs)


def parse_grid(
    document: Mapping[str, Any]
) -> Tuple[Wavelength, Optional[FractalGrid]]:
    """
    Build just the fractal grid of a document's transmit array,
    without validating the receive side against it
    """
    document = _table(document, "config")
    _check_keys(document, "", TOP_LEVEL)

    wavelength = _parse_wavelength(document)
    transmit = _parse_transmit(document.get("transmit", {}), wavelength)
    distance = ExperimentConfig.distance
    if "distance" in document:
        distance = _parse_distance(document, wavelength)
    _positive("distance", distance)
    return wavelength, _make_grid(transmit, distance)


def apply_overrides(
    document: Mapping[str, Any], overrides: Mapping[str, Any]
) -> Dict[str, Any]:
    """
    Return a copy of `document` with each dotted key of
    `overrides`, e.g. `"receive.radius"`, set to its value.
    `None` values are skipped so unset CLI flags can be passed
    straight through.
    """
    document = json.loads(json.dumps(document))
    for key, value in overrides.items():
        if value is None:
            continue
        *sections, name = key.split(".")
        target = document
        for section in sections:
            target = target.setdefault(section, {})
        target[name] = value
    return document


def load_document(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Read a TOML config, or start from the defaults when `path`
    is None, and apply any dotted-key overrides.
    """
    document = {}
    if path is not None:
        try:
            document = toml.load(path)
        except (OSError, toml.TomlDecodeError) as e:
            raise ConfigError(f"{path}: {e}") from None
    return apply_overrides(document, overrides or {})


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    return parse_config(load_document(path, overrides))
