"""Study configuration files: INI sections with a strict schema.

Sections are {kinetics, wave, geometry, initial, solver, study}; every key
must be known (unknown keys are errors, catching typos early).  Values are
plain scalars or comma-separated lists.  See README for the documented
schema and per-study examples.
"""

from __future__ import annotations

import configparser

from .errors import ConfigurationError
from .geometry import ConvexBody
from .solver import InitialData

_FLOAT_LIST = "float_list"

SCHEMA = {
    "kinetics": {
        "epsilon": float,
        "cutoff_inner": float,
        "cutoff_outer": float,
    },
    "wave": {
        "speeds": _FLOAT_LIST,
        "dz": float,
        "z_span": float,
    },
    "geometry": {
        "shape": str,  # interval | ball | ellipse
        "a": float,
        "b": float,
        "center": _FLOAT_LIST,
        "radius": float,
        "semi_axes": _FLOAT_LIST,
        "d0": float,
    },
    "initial": {
        "variant": str,  # compact | algebraic
        "amplitude": float,
        "width": float,
        "tail_lambda": float,
        "tail_cap": float,
        "m": float,
        "n": float,
        "cap": float,
    },
    "solver": {
        "mode": str,  # line | radial | plane
        "dim": int,
        "t_end": float,
        "dt": float,
        "extent": float,  # 0 = automatic from the outflow margin
        "checkpoints": _FLOAT_LIST,
    },
    "study": {
        "epsilons": _FLOAT_LIST,
        "fit_window": float,  # speed fit starts at fit_window * t_end
        "probe_t": float,
        "probe_x": float,
        "k": float,
        "c_motion": float,
        "gen_window": float,  # generation barrier window, units of eps|ln eps|
        "ordering_tol": float,
        "residual_tol": float,
    },
}


def _convert(section, key, raw):
    kind = SCHEMA[section][key]
    try:
        if kind is _FLOAT_LIST:
            return tuple(float(v) for v in raw.split(",") if v.strip())
        return kind(raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for [{section}] {key}: {raw!r}") from exc


def load_config(path) -> dict:
    """Parse and validate a config file into {section: {key: value}}."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigurationError(f"config file not found: {path}")
    out = {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigurationError(f"unknown config section [{section}]")
        out[section] = {}
        for key, raw in cp[section].items():
            if key not in SCHEMA[section]:
                raise ConfigurationError(f"unknown key {key!r} in section [{section}]")
            out[section][key] = _convert(section, key, raw)
    return out


def body_from_config(cfg: dict) -> ConvexBody:
    g = cfg.get("geometry", {})
    shape = g.get("shape", "interval")
    if shape == "interval":
        return ConvexBody.interval(g.get("a", -0.5), g.get("b", 0.5))
    if shape == "ball":
        return ConvexBody.ball(g.get("center", (0.0, 0.0)), g.get("radius", 0.5))
    if shape == "ellipse":
        return ConvexBody.ellipse(g.get("center", (0.0, 0.0)),
                                  g.get("semi_axes", (0.6, 0.4)))
    raise ConfigurationError(f"unknown shape {shape!r}")


def initial_from_config(cfg: dict, body: ConvexBody | None) -> InitialData:
    ini = cfg.get("initial", {})
    variant = ini.get("variant", "compact")
    if variant == "compact":
        tail = None
        if "tail_lambda" in ini or "tail_cap" in ini:
            tail = (ini.get("tail_lambda", 1.0), ini.get("tail_cap", 0.0))
            if tail[1] == 0.0:
                tail = None
        return InitialData.compact(
            body, ini.get("amplitude", 0.9), ini.get("width", 0.25), tail
        )
    if variant == "algebraic":
        m = ini.get("m", 0.5)
        return InitialData.algebraic(m, ini.get("n", 2.0), ini.get("cap", m))
    raise ConfigurationError(f"unknown initial variant {variant!r}")
