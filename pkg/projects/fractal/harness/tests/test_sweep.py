import math
import os

import numpy as np
import pytest

from harness.config import (
    ConfigError,
    ExperimentConfig,
    LinkConfig,
    ReceiveConfig,
    SweepConfig,
    TransmitConfig,
)
from harness.experiment import run_link
from harness.sweep import (
    SweepSpec,
    max_workers,
    parse_values,
    point_config,
    run_sweep,
)
from talbot.geometry import GridIndex, Wavelength


@pytest.fixture
def base_config():
    return ExperimentConfig(
        receive=ReceiveConfig(radius=1.67, allow_oversize=True),
        link=LinkConfig(snr_db=(20.0,)),
    )


class TestParseValues:
    def test_range(self):
        values = parse_values("0:2:30", "snr")
        assert len(values) == 16
        assert values[0] == 0 and values[-1] == 30

    def test_range_rounding(self):
        values = parse_values("0.1:0.1:2.5", "receive_radius")
        assert len(values) == 25
        assert math.isclose(values[-1], 2.5)

    def test_descending(self):
        assert parse_values("5:-1:1", "snr") == [5, 4, 3, 2, 1]

    def test_list(self):
        assert parse_values("1, 2;3", "distance") == [1.0, 2.0, 3.0]

    @pytest.mark.parametrize("text", ["2,5;5,2", "2,5 5,2", " 2,5 ;\n5,2 "])
    def test_grid(self, text):
        values = parse_values(text, "grid_index")
        assert values == [GridIndex(2, 5), GridIndex(5, 2)]

    @pytest.mark.parametrize(
        "text,parameter",
        [
            ("1:0:3", "snr"),
            ("3:1:1", "snr"),
            ("1:x:3", "snr"),
            ("a,b", "snr"),
            ("", "snr"),
            (" ; ", "distance"),
            ("1;2", "grid_index"),
            ("0:2:30", "phase"),
        ],
    )
    def test_errors(self, text, parameter):
        with pytest.raises(ConfigError, match="^sweep."):
            parse_values(text, parameter)


class TestSweepSpec:
    def test_lengths_converted(self):
        sweep = SweepConfig(parameter="distance", values="7500:500:9000")
        spec = SweepSpec.from_config(sweep, Wavelength(10.0, "mm"))
        assert spec.values == (750.0, 800.0, 850.0, 900.0)
        assert len(spec) == 4

    def test_snr_not_converted(self):
        sweep = SweepConfig(values="0,10")
        spec = SweepSpec.from_config(sweep, Wavelength(10.0, "mm"))
        assert spec.values == (0.0, 10.0)

    def test_positive_lengths(self):
        with pytest.raises(ConfigError):
            SweepSpec("receive_radius", [1.0, 0.0])

    def test_empty(self):
        with pytest.raises(ConfigError):
            SweepSpec("snr", [])


class TestPointConfig:
    def test_snr(self, base_config):
        config, snr_db = point_config(base_config, SweepSpec("snr", [3]), 3)
        assert snr_db == 3.0
        assert config == base_config

    def test_first_snr(self, base_config):
        spec = SweepSpec("receive_radius", [1.0])
        config, snr_db = point_config(base_config, spec, 1.0)
        assert snr_db == 20.0
        assert config.receive.radius == 1.0

    def test_grid_index(self, base_config):
        spec = SweepSpec("grid_index", [GridIndex(1, 2)])
        config, _ = point_config(base_config, spec, GridIndex(1, 2))
        assert config.receive.grid_index == GridIndex(1, 2)

    def test_tie(self, base_config):
        spec = SweepSpec("distance", [2000.0], tie_receive_radius=0.25)
        config, _ = point_config(base_config, spec, 2000.0)
        assert config.distance == 2000.0
        assert math.isclose(config.receive.radius, 0.25 * 2000 / 150)

    def test_validates(self):
        config = ExperimentConfig(transmit=TransmitConfig(radius=0.4))
        spec = SweepSpec("grid_index", [GridIndex(1, 1)])
        with pytest.raises(ConfigError):
            point_config(config, spec, GridIndex(1, 1))


class TestMaxWorkers:
    def test_env(self, monkeypatch):
        monkeypatch.setenv("FRACTAL_MAX_WORKERS", "3")
        assert max_workers() == 3

    def test_default(self, monkeypatch):
        monkeypatch.delenv("FRACTAL_MAX_WORKERS", raising=False)
        assert max_workers() == (os.cpu_count() or 1)

    @pytest.mark.parametrize("value", ["0", "-2", "many"])
    def test_invalid(self, value, monkeypatch):
        monkeypatch.setenv("FRACTAL_MAX_WORKERS", value)
        with pytest.raises(ConfigError, match="FRACTAL_MAX_WORKERS"):
            max_workers()


class TestRunSweep:
    def test_snr(self, base_config, serial):
        spec = SweepSpec("snr", parse_values("0:2:30", "snr"))
        table = run_sweep(base_config, spec)
        assert len(table) == 16
        np.testing.assert_array_equal(table.value, table.snr_db)
        assert (np.diff(table.capacity) > 0).all()
        assert table.sinr.shape == (16, 6)
        assert table.parameter == "snr"
        assert table.seed == 0
        assert np.isnan(table.ber_mc).all()

    def test_config_sweep(self, serial):
        config = ExperimentConfig(sweep=SweepConfig(values="0,10"))
        table = run_sweep(config)
        np.testing.assert_array_equal(table.snr_db, [0, 10])

    def test_missing_sweep(self):
        with pytest.raises(ConfigError, match="^sweep"):
            run_sweep(ExperimentConfig())

    def test_single_point(self, base_config, serial):
        table = run_sweep(base_config, SweepSpec("snr", [20.0]))
        result = run_link(base_config, 20.0)
        assert table.capacity[0] == result.capacity
        np.testing.assert_array_equal(table.sinr[0], result.sinr)

    def test_worker_independence(self, base_config):
        config = ExperimentConfig(
            receive=base_config.receive,
            link=LinkConfig(snr_db=(0.0,), trials=500),
            seed=7,
        )
        spec = SweepSpec("snr", [0.0, 2.0, 4.0])
        inline = run_sweep(config, spec, num_workers=1)
        pooled = run_sweep(config, spec, num_workers=2)
        np.testing.assert_array_equal(inline.value, pooled.value)
        np.testing.assert_array_equal(inline.ber_mc, pooled.ber_mc)
        np.testing.assert_array_equal(inline.capacity, pooled.capacity)

    def test_grid_index(self, base_config, serial):
        indices = [GridIndex(2, 5), GridIndex(5, 2)]
        table = run_sweep(base_config, SweepSpec("grid_index", indices))
        np.testing.assert_array_equal(table.value, [0, 1])
        np.testing.assert_array_equal(table.grid_m, [2, 5])
        np.testing.assert_array_equal(table.grid_n, [5, 2])
        assert table.capacity[0] > table.capacity[1]

    def test_explicit_center(self, serial):
        receive = ReceiveConfig(center=(1.0, 2.0))
        config = ExperimentConfig(receive=receive)
        table = run_sweep(config, SweepSpec("snr", [10.0]))
        assert np.isnan(table.grid_m).all()


class TestInteriorMaximum:
    def test_receive_radius(self, base_config, serial):
        radii = np.linspace(0.1, 2.57, 25)
        table = run_sweep(base_config, SweepSpec("receive_radius", radii))
        best = int(np.argmax(table.capacity))
        assert 0 < best < len(radii) - 1

    def test_transmit_radius(self, serial):
        config = ExperimentConfig(
            receive=ReceiveConfig(radius=1.283, allow_oversize=True)
        )
        radii = [0.5] + list(range(25, 301, 25))
        table = run_sweep(config, SweepSpec("transmit_radius", radii))
        best = int(np.argmax(table.capacity))
        assert 0 < best < len(radii) - 1


def test_distance_study(serial):
    tables = {}
    for baseline in ("fractal", "normal"):
        config = ExperimentConfig(
            transmit=TransmitConfig(radius=150.0, baseline=baseline),
            receive=ReceiveConfig(grid_index=GridIndex(2, 2)),
        )
        spec = SweepSpec(
            "distance",
            parse_values("900:100:1500", "distance"),
            tie_receive_radius=0.25,
        )
        tables[baseline] = run_sweep(config, spec)

    fractal, normal = tables["fractal"], tables["normal"]
    np.testing.assert_allclose(fractal.receive_radius, fractal.distance / 600)
    assert (fractal.capacity > normal.capacity).all()
