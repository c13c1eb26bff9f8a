import logging

import pytest
import toml

# millimeter prototype: lambda = 10, R_t = 30, z = 75
PROTOTYPE = {
    "units": "mm",
    "wavelength": 10.0,
    "distance": 75.0,
    "transmit": {"radius": 30.0},
    "receive": {"radius": 5.0},
}


@pytest.fixture(scope="function")
def outdir(tmp_path):
    outdir = tmp_path / "out"
    outdir.mkdir(parents=True, exist_ok=False)
    yield outdir
    logging.shutdown()


@pytest.fixture
def write_config(tmp_path):
    def fn(document, name="config.toml"):
        path = tmp_path / name
        with open(path, "w") as f:
            toml.dump(document, f)
        return path

    return fn


@pytest.fixture
def prototype_document():
    return {
        k: dict(v) if isinstance(v, dict) else v
        for k, v in PROTOTYPE.items()
    }


@pytest.fixture
def serial(monkeypatch):
    monkeypatch.setenv("FRACTAL_MAX_WORKERS", "1")
