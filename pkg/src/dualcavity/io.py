"""Configuration loading and deterministic CSV / JSON writers."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .classical import ClassicalModeState
from .config import CavityConfig, ConfigError, ModeSet, UnitSystem, mode_set_from_alphas


def fmt(x: float) -> str:
    """17 significant digits: round-trips any double."""
    return format(float(x), ".17g")


def write_csv(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def write_json(path, doc):
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


@dataclass
class RunConfig:
    """Everything a CLI run needs from the configuration document."""

    cavity: CavityConfig
    modes: ModeSet
    states: list
    K1: list
    K2: list
    n_levels: int = 12
    grid: dict = field(default_factory=lambda: {"nz": 33, "nt": 17, "t_max": None})
    dirac: dict = field(default_factory=lambda: {"J_ratio_low": 1.2e4, "J_ratio_high": 1.6e4,
                                                   "n": 2})
    raw: dict = field(default_factory=dict)


_TOP_KEYS = {"L", "V", "c", "eps0", "mu0", "unit_system", "m_default", "hbar", "e",
             "modes", "grid", "fock", "dirac"}
_MODE_KEYS = {"alpha", "m", "C1_re", "C1_im", "C2_re", "C2_im", "K1", "K2"}


def _number(doc, key, where, default=None, required=False):
    if key not in doc or doc[key] is None:
        if required:
            raise ConfigError(f"{where}{key}", "missing")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}{key}", f"must be a number, got {v!r}")
    return v


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    try:
        units = UnitSystem(doc.get("unit_system", "NATURAL"))
    except ValueError:
        raise ConfigError("unit_system", f"must be one of SI, CGS, NATURAL, got {doc['unit_system']!r}")
    cavity = CavityConfig(
        L=_number(doc, "L", "", required=True),
        V=_number(doc, "V", "", required=True),
        c=_number(doc, "c", ""),
        eps0=_number(doc, "eps0", ""),
        mu0=_number(doc, "mu0", ""),
        unit_system=units,
        m_default=_number(doc, "m_default", "", 1.0),
        hbar=_number(doc, "hbar", ""),
        e=_number(doc, "e", ""),
    )
    modes = doc.get("modes")
    if not isinstance(modes, list) or not modes:
        raise ConfigError("modes", "must be a non-empty list")
    alphas, masses, states, K1, K2 = [], [], [], [], []
    for i, m in enumerate(modes):
        where = f"modes[{i}]."
        if not isinstance(m, dict):
            raise ConfigError(f"modes[{i}]", "must be an object")
        unknown = set(m) - _MODE_KEYS
        if unknown:
            raise ConfigError(where + sorted(unknown)[0], "unknown key")
        alpha = _number(m, "alpha", where, required=True)
        if int(alpha) != alpha or alpha < 1:
            raise ConfigError(where + "alpha", f"must be a positive integer, got {alpha!r}")
        alphas.append(int(alpha))
        masses.append(_number(m, "m", where, cavity.m_default))
        states.append(ClassicalModeState(
            complex(_number(m, "C1_re", where, 0.0), _number(m, "C1_im", where, 0.0)),
            complex(_number(m, "C2_re", where, 0.0), _number(m, "C2_im", where, 0.0))))
        K1.append(float(_number(m, "K1", where, 1.0)))
        K2.append(float(_number(m, "K2", where, 1.0)))
    if sorted(set(alphas)) != alphas:
        raise ConfigError("modes", "alpha values must be strictly increasing")
    mode_set = mode_set_from_alphas(cavity, alphas, masses)

    run = RunConfig(cavity, mode_set, states, K1, K2, raw=doc)
    fock = doc.get("fock", {}) or {}
    n_levels = _number(fock, "n_levels", "fock.", 12)
    if int(n_levels) != n_levels:
        raise ConfigError("fock.n_levels", "must be an integer")
    run.n_levels = int(n_levels)
    grid = dict(run.grid)
    for key in ("nz", "nt"):
        v = _number(doc.get("grid", {}) or {}, key, "grid.", grid[key])
        if int(v) != v or v < 2:
            raise ConfigError(f"grid.{key}", "must be an integer >= 2")
        grid[key] = int(v)
    grid["t_max"] = _number(doc.get("grid", {}) or {}, "t_max", "grid.", None)
    run.grid = grid
    dirac = dict(run.dirac)
    for key in ("J_ratio_low", "J_ratio_high", "n"):
        dirac[key] = _number(doc.get("dirac", {}) or {}, key, "dirac.", dirac[key])
    run.dirac = dirac
    return run


def load_config(path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}")
    return parse_config(doc)


DEFAULT_CONFIG = {
    "L": 3.141592653589793,
    "V": 1.0,
    "unit_system": "NATURAL",
    "modes": [
        {"alpha": 1, "C1_re": 0.5, "C1_im": 0.25, "C2_re": 0.5, "C2_im": -0.25},
        {"alpha": 2, "C1_re": -0.3, "C1_im": 0.1, "C2_re": -0.3, "C2_im": -0.1},
        {"alpha": 3, "C1_re": 0.2, "C1_im": 0.4, "C2_re": 0.2, "C2_im": -0.4},
    ],
    "fock": {"n_levels": 12},
}
