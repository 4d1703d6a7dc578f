"""Experiment configuration: a flat, hand-editable TOML document mapped onto a
dataclass, with a canonical hash used to stamp every output file.

The configuration round-trips losslessly through dict/TOML/JSON so that a run
can be reproduced from its manifest alone.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .errors import ConfigurationError

__all__ = ["ExperimentConfig", "load_config", "dump_toml", "config_hash"]

_MODELS = ("schrodinger", "dirac", "synthetic")
_PRESETS = ("physical", "normalized")


@dataclass(frozen=True)
class ExperimentConfig:
    """All knobs of a single evolution/sweep/spectral experiment.

    Grid fields set to None fall back to the per-family defaults of the
    producing module.
    """

    model: str = "schrodinger"
    family: int = 1
    eps: float = 0.5
    beta: float = 0.0
    omega: float = 0.6
    t_end: float = 100.0
    dt: float = 0.01
    stride: int = 100
    preset: str = "physical"
    half_length: float = 0.0          # 0 -> family default fast-grid half length
    points_per_period: int = 0        # 0 -> family default resolution
    slow_half_length: float = 100.0
    slow_dX: float = 0.05
    n_cell: int = 0                   # 0 -> family default cell resolution
    wall_shift: float = 0.125
    snapshot_times: tuple = ()
    fit_window_start: float = 50.0
    eta: float = 0.0                  # 0 -> broadening default (4x level spacing)
    label: str = ""

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ConfigurationError(f"unknown model {self.model!r}; expected one of {_MODELS}")
        if self.preset not in _PRESETS:
            raise ConfigurationError(f"unknown preset {self.preset!r}; expected one of {_PRESETS}")
        if self.family not in (1, 2, 3):
            raise ConfigurationError(f"family must be 1, 2, or 3, got {self.family}")
        if self.eps <= 0 or self.dt <= 0 or self.t_end <= 0:
            raise ConfigurationError("eps, dt, and t_end must be positive")
        if self.beta < 0 or self.omega <= 0:
            raise ConfigurationError("beta must be >= 0 and omega > 0")
        object.__setattr__(self, "snapshot_times", tuple(float(s) for s in self.snapshot_times))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["snapshot_times"] = list(d["snapshot_times"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def replace(self, **kwargs) -> "ExperimentConfig":
        return dataclasses.replace(self, **kwargs)


def load_config(path: str) -> ExperimentConfig:
    """Read a flat TOML config file."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed config file {path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


def _toml_string(s: str) -> str:
    # TOML basic string: escape backslash, quote, and control characters.
    # json.dumps is unsuitable here because it encodes astral-plane characters
    # as surrogate pairs, which TOML rejects.
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return _toml_string(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise ConfigurationError(f"cannot serialize config value {v!r}")


def dump_toml(config: ExperimentConfig) -> str:
    """Serialize to flat TOML; load_config(dump_toml(c)) == c."""
    return "".join(f"{k} = {_toml_value(v)}\n" for k, v in config.to_dict().items())


def config_hash(config: ExperimentConfig) -> str:
    """Stable short hash of the canonical JSON form."""
    canon = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
