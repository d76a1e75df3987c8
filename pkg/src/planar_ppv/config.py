"""Strict flat key-value run configuration.

Grammar: ``[section]`` headers, ``key = value`` lines, ``#`` comments.
Unknown sections or keys are rejected with the offending line number;
typos in numerically sensitive fields must not pass silently.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ConfigurationError
from .models import get_model

__all__ = ["RunConfig", "load_config", "parse_config"]

EXPERIMENT_SECTIONS = ("verify", "ppv-fourier", "lock-scan", "noise",
                       "isochron")

_DEFAULT_GUESS = {
    "vanderpol": (2.0, 0.0),
    "stuart_landau": (0.2, 0.0),
    "brusselator": (1.5, 1.5),
}


def _parse_float(s):
    return float(s)


def _parse_int(s):
    return int(s)


def _parse_bool(s):
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_vec2(s):
    parts = s.replace(",", " ").split()
    if len(parts) != 2:
        raise ValueError(f"expected two components, got {len(parts)}")
    return np.array([float(p) for p in parts])


def _parse_floats(s):
    parts = s.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return [float(p) for p in parts]


_SCHEMA = {
    "model": None,  # validated via the model registry
    "cycle": {"guess": _parse_vec2, "settle_time": _parse_float,
              "tol": _parse_float},
    "basis": {"grid": _parse_int},
    "output": {"dir": str, "seed": _parse_int},
    "verify": {"tol": _parse_float},
    "ppv-fourier": {"harmonics": _parse_int},
    "lock-scan": {"amp": _parse_vec2, "eps": _parse_floats,
                  "detuning_min": _parse_float, "detuning_max": _parse_float,
                  "detuning_n": _parse_int, "t_end": _parse_float},
    "noise": {"kind": str, "sigma": _parse_float, "direction": _parse_vec2,
              "n_paths": _parse_int, "t_end": _parse_float,
              "dt": _parse_float, "density": _parse_bool,
              "density_cells": _parse_int,
              "density_halfwidth": _parse_float},
    "isochron": {"t_star": _parse_float, "offsets": _parse_floats,
                 "horizon": _parse_float},
}

_DEFAULTS = {
    "cycle": {"settle_time": 100.0, "tol": 1e-10},
    "basis": {"grid": 1024},
    "output": {"dir": "out", "seed": 0},
    "verify": {"tol": 1e-5},
    "ppv-fourier": {"harmonics": 16},
    "lock-scan": {"t_end": -1.0},  # -1: auto per eps
    "noise": {"kind": "isotropic", "density": True,
              "density_cells": 321, "density_halfwidth": -1.0},
    "isochron": {},
}


@dataclass
class RunConfig:
    """Validated pipeline configuration."""

    model_name: str
    model_params: dict
    cycle: dict
    grid: int
    outdir: str
    seed: int
    sections: dict = field(default_factory=dict)  # experiment name -> params

    def make_model(self):
        return get_model(self.model_name, **self.model_params)


def parse_config(text):
    """Parse and validate configuration text into a :class:`RunConfig`."""
    raw = {}
    section = None
    section_lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("malformed section header", line=lineno)
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", line=lineno)
            if section in raw:
                raise ConfigError(f"duplicate section [{section}]",
                                  line=lineno)
            raw[section] = {}
            section_lines[section] = lineno
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}",
                              line=lineno)
        if section is None:
            raise ConfigError("key outside any [section]", line=lineno)
        key, value = (p.strip() for p in stripped.split("=", 1))
        if key in raw[section]:
            raise ConfigError(f"duplicate key {key!r}", line=lineno)
        schema = _SCHEMA[section]
        if schema is not None and key not in schema:
            raise ConfigError(
                f"unknown key {key!r} in section [{section}]", line=lineno)
        if schema is None:
            raw[section][key] = (value, lineno)
        else:
            try:
                raw[section][key] = (schema[key](value), lineno)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}",
                                  line=lineno)

    if "model" not in raw:
        raise ConfigError("missing [model] section")
    model_raw = {k: v for k, (v, _) in raw["model"].items()}
    if "name" not in model_raw:
        raise ConfigError("missing model name",
                          line=section_lines.get("model"))
    name = model_raw.pop("name")
    try:
        params = {k: float(v) for k, v in model_raw.items()}
        get_model(name, **params)  # validates name + parameter keys
    except (ConfigurationError, ValueError) as exc:
        raise ConfigError(str(exc), line=section_lines.get("model"))

    def section_dict(sec):
        merged = dict(_DEFAULTS.get(sec, {}))
        merged.update({k: v for k, (v, _) in raw.get(sec, {}).items()})
        return merged

    cycle = section_dict("cycle")
    if "guess" not in cycle:
        cycle["guess"] = np.array(_DEFAULT_GUESS[name])
    basis = section_dict("basis")
    output = section_dict("output")

    sections = {}
    for sec in EXPERIMENT_SECTIONS:
        if sec in raw:
            sections[sec] = section_dict(sec)
    if not sections:
        raise ConfigError("no experiment section requested "
                          f"(one of {', '.join(EXPERIMENT_SECTIONS)})")
    for required in ("t_star", "offsets", "horizon"):
        if "isochron" in sections and required not in sections["isochron"]:
            raise ConfigError(f"[isochron] needs key {required!r}",
                              line=section_lines.get("isochron"))
    if "lock-scan" in sections:
        for required in ("amp", "eps", "detuning_min", "detuning_max",
                         "detuning_n"):
            if required not in sections["lock-scan"]:
                raise ConfigError(f"[lock-scan] needs key {required!r}",
                                  line=section_lines.get("lock-scan"))
    if "noise" in sections:
        for required in ("sigma", "n_paths", "t_end", "dt"):
            if required not in sections["noise"]:
                raise ConfigError(f"[noise] needs key {required!r}",
                                  line=section_lines.get("noise"))

    return RunConfig(model_name=name, model_params=params, cycle=cycle,
                     grid=basis["grid"], outdir=output["dir"],
                     seed=output["seed"], sections=sections)


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())
