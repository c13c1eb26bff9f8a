import os
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Union

import h5py
import numpy as np

PATH = Union[str, bytes, os.PathLike]


# tag each field of a table with how it's stored, so that
# new outputs only need to be annotated with the right kind
def column():
    return field(metadata={"kind": "column"}, default_factory=_empty)


def metadata(default=None):
    return field(metadata={"kind": "metadata"}, default=default)


def _empty():
    return np.array([])


@dataclass
class CurveTable:
    """
    One row per evaluated link, in sweep order. Lengths are
    in wavelengths, and `sinr` holds one column per mode.
    Missing Monte Carlo results are stored as NaN.
    """

    value: np.ndarray = column()
    grid_m: np.ndarray = column()
    grid_n: np.ndarray = column()
    snr_db: np.ndarray = column()
    transmit_radius: np.ndarray = column()
    receive_radius: np.ndarray = column()
    distance: np.ndarray = column()
    sinr: np.ndarray = column()
    capacity: np.ndarray = column()
    ber_analytic: np.ndarray = column()
    ber_mc: np.ndarray = column()
    ber_mc_stderr: np.ndarray = column()

    parameter: Optional[str] = metadata()
    config_hash: Optional[str] = metadata()
    seed: Optional[int] = metadata()
    version: Optional[str] = metadata()
    wavelength: Optional[str] = metadata()

    def __post_init__(self):
        # make sure every column has the same number of rows
        _length = None
        for key in self._get_columns():
            value = np.asarray(getattr(self, key), dtype=float)
            if key == "sinr" and value.ndim == 1 and not len(value):
                value = value.reshape(0, 0)
            setattr(self, key, value)

            if _length is None:
                _length = len(value)
            elif len(value) != _length:
                raise ValueError(
                    "Field {} has {} entries, expected {}".format(
                        key, len(value), _length
                    )
                )
        if self.sinr.ndim != 2:
            raise ValueError(
                f"sinr must have one column per mode, got {self.sinr.shape}"
            )
        self._length = _length or 0

    def __len__(self):
        return self._length

    def __iter__(self):
        columns = self._get_columns()
        for i in range(len(self)):
            yield {key: getattr(self, key)[i] for key in columns}

    def __getitem__(self, *args, **kwargs):
        init_kwargs = {}
        for key, attr in self.__dataclass_fields__.items():
            value = getattr(self, key)
            if attr.metadata["kind"] == "column":
                value = value.__getitem__(*args, **kwargs)
                # keep a row axis when indexing a single row
                if value.ndim == (1 if key == "sinr" else 0):
                    value = value[None]
            init_kwargs[key] = value
        return type(self)(**init_kwargs)

    @classmethod
    def _get_columns(cls) -> List[str]:
        return [
            k
            for k, v in cls.__dataclass_fields__.items()
            if v.metadata["kind"] == "column"
        ]

    @classmethod
    def from_rows(cls, rows: Iterable[Dict[str, Any]], **kwargs):
        rows = list(rows)
        columns = {}
        for key in cls._get_columns():
            columns[key] = np.array([row[key] for row in rows], dtype=float)
        return cls(**columns, **kwargs)

    @property
    def num_modes(self) -> int:
        return self.sinr.shape[1]

    @property
    def has_monte_carlo(self) -> bool:
        return bool(np.isfinite(self.ber_mc).any())

    @property
    def names(self) -> List[str]:
        """Flattened column names, as written to CSV"""
        names = []
        for key in self._get_columns():
            if key == "sinr":
                names.extend(f"sinr_{i}" for i in range(self.num_modes))
            elif key.startswith("ber_mc") and not self.has_monte_carlo:
                continue
            else:
                names.append(key)
        return names

    def to_array(self) -> np.ndarray:
        """Rows of the flattened columns in `names`"""
        columns = []
        for key in self._get_columns():
            value = getattr(self, key)
            if key == "sinr":
                columns.extend(value.T)
            elif key.startswith("ber_mc") and not self.has_monte_carlo:
                continue
            else:
                columns.append(value)
        return np.stack(columns, axis=-1).reshape(len(self), -1)

    def write(self, fname: PATH) -> None:
        with h5py.File(fname, "w") as f:
            f.attrs["length"] = len(self)
            columns = f.create_group("columns")
            for key, attr in self.__dataclass_fields__.items():
                value = getattr(self, key)
                if attr.metadata["kind"] == "column":
                    columns[key] = value
                elif value is not None:
                    f.attrs[key] = value

    @classmethod
    def read(cls, fname: PATH) -> "CurveTable":
        kwargs = {}
        with h5py.File(fname, "r") as f:
            try:
                columns = f["columns"]
            except KeyError:
                raise ValueError(
                    f"Archive {f.filename} has no group columns"
                ) from None

            for key, attr in cls.__dataclass_fields__.items():
                if attr.metadata["kind"] == "metadata":
                    value = f.attrs.get(key)
                    if isinstance(value, np.integer):
                        value = int(value)
                    kwargs[key] = value
                    continue

                try:
                    kwargs[key] = columns[key][:]
                except KeyError:
                    raise ValueError(
                        "Archive {} has no column {}".format(f.filename, key)
                    ) from None
        return cls(**kwargs)

    @classmethod
    def compare_metadata(cls, key, ours, theirs):
        if ours is None:
            return theirs
        elif theirs is None:
            return ours
        elif ours != theirs:
            raise ValueError(
                "Can't append {} with {} value {} "
                "when ours is {}".format(cls.__name__, key, theirs, ours)
            )
        return ours

    def append(self, other: "CurveTable") -> None:
        if not isinstance(other, type(self)):
            raise TypeError(
                "Can't append {} to {}".format(type(other), type(self))
            )

        new_dict = {}
        for key, attr in self.__dataclass_fields__.items():
            ours = getattr(self, key)
            theirs = getattr(other, key)
            if attr.metadata["kind"] == "metadata":
                new_dict[key] = self.compare_metadata(key, ours, theirs)
            elif len(ours) == 0:
                new_dict[key] = theirs
            else:
                new_dict[key] = np.concatenate([ours, theirs])

        self.__dict__.update(new_dict)
        self.__post_init__()
