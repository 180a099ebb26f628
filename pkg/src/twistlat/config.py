"""Run configuration: a single key = value sections file (INI dialect).

Every constant an experiment depends on (thick parameter, additive constants,
grids, sweep sizes, seed) lives here rather than in code, and two runs with
equal configurations produce byte-identical CSV outputs.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields

DEFAULT_SEED = 0xDE47  # 64-bit seed; all sweeps derive their streams from it


class ConfigError(Exception):
    """Malformed configuration; message carries section/field context."""


@dataclass
class RunConfig:
    experiment: str = "verify-all"
    seed: int = DEFAULT_SEED
    out_dir: str = "out"
    threads: int = 1

    # structure / basepoint
    structure: str = "modular"  # "modular" or "markoff(x,y,z;eps)" literal
    eps: float = 0.3
    sample_count: int = 20
    basepoint_re: float = 0.0
    basepoint_im: float = 1.0

    # grids
    l_min: float = 20.0
    l_max: float = 200.0
    rho: float = 1.25
    r_min: float = 6.0
    r_max: float = 13.0
    r_step: float = 0.5

    # sweep sizes
    sweep_geometric: int = 10_000
    sweep_arithmetic: int = 100_000
    sweep_sandwich: int = 1_000
    max_power: int = 50

    # constants
    l_const: float = 4.0
    k_values: tuple[float, ...] = (0.25, 0.5, 0.75)
    teich_scale: float = 0.5

    # verify / fit selections
    theorems: str = "all"
    fit_input: str = ""
    scaled_weights: tuple[int, ...] = (2, 3, 5)

    def radius_grid(self) -> list[float]:
        out = []
        r = self.r_min
        while r <= self.r_max + 1e-9:
            out.append(round(r, 12))
            r += self.r_step
        return out

    def canonical_text(self) -> str:
        parts = [f"{f.name}={getattr(self, f.name)!r}" for f in fields(self)]
        return "\n".join(parts)


_SCHEMA = {
    "run": {
        "experiment": ("experiment", str),
        "seed": ("seed", int),
        "out": ("out_dir", str),
        "threads": ("threads", int),
    },
    "structure": {
        "kind": ("structure", str),
        "eps": ("eps", float),
        "sample_count": ("sample_count", int),
        "basepoint_re": ("basepoint_re", float),
        "basepoint_im": ("basepoint_im", float),
    },
    "grid": {
        "l_min": ("l_min", float),
        "l_max": ("l_max", float),
        "rho": ("rho", float),
        "r_min": ("r_min", float),
        "r_max": ("r_max", float),
        "r_step": ("r_step", float),
    },
    "sweeps": {
        "geometric": ("sweep_geometric", int),
        "arithmetic": ("sweep_arithmetic", int),
        "sandwich": ("sweep_sandwich", int),
        "max_power": ("max_power", int),
    },
    "constants": {
        "l_const": ("l_const", float),
        "k_values": ("k_values", "float_tuple"),
        "teich_scale": ("teich_scale", float),
    },
    "verify": {
        "theorems": ("theorems", str),
    },
    "fit": {
        "input": ("fit_input", str),
        "scaled_weights": ("scaled_weights", "int_tuple"),
    },
}


def _convert(raw: str, kind, where: str):
    try:
        if kind is int:
            return int(raw, 0)
        if kind is float:
            return float(raw)
        if kind == "float_tuple":
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if kind == "int_tuple":
            return tuple(int(v) for v in raw.split(",") if v.strip())
        return raw
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {raw!r} ({exc})") from exc


def load_config(path: str | None) -> RunConfig:
    """Parse a config file over the defaults; unknown keys are errors."""
    cfg = RunConfig()
    if path is None:
        return cfg
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown field {section}.{key}")
            attr, kind = _SCHEMA[section][key]
            setattr(cfg, attr, _convert(raw, kind, f"{section}.{key}"))
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.threads < 1:
        raise ConfigError("run.threads must be >= 1")
    if not (0 < cfg.eps):
        raise ConfigError("structure.eps must be positive")
    if cfg.basepoint_im <= 0:
        raise ConfigError("structure.basepoint_im must be positive")
    if cfg.rho <= 1:
        raise ConfigError("grid.rho must exceed 1")
    if cfg.r_step <= 0:
        raise ConfigError("grid.r_step must be positive")
    if any(not (0 < k < 1) for k in cfg.k_values):
        raise ConfigError("constants.k_values must lie in (0, 1)")
    if cfg.teich_scale <= 0:
        raise ConfigError("constants.teich_scale must be positive")
    if not (cfg.seed >= 0 and cfg.seed < 2**64):
        raise ConfigError("run.seed must be a 64-bit nonnegative integer")


def dump_default_config() -> str:
    """Template with every recognised key at its default."""
    cfg = RunConfig()
    buf = io.StringIO()
    for section, keys in _SCHEMA.items():
        buf.write(f"[{section}]\n")
        for key, (attr, kind) in keys.items():
            val = getattr(cfg, attr)
            if isinstance(val, tuple):
                val = ",".join(str(v) for v in val)
            buf.write(f"{key} = {val}\n")
        buf.write("\n")
    return buf.getvalue()
