"""Cavity configuration and per-mode constants."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants as _const


class ConfigError(ValueError):
    """Invalid configuration value; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class CapabilityError(RuntimeError):
    """Request outside the supported envelope (e.g. Fock truncation too large)."""


class UnitSystem(str, enum.Enum):
    SI = "SI"
    CGS = "CGS"
    NATURAL = "NATURAL"


# SI: eps0 derived from mu0 and c so that c^2 eps0 mu0 == 1 to round-off.
_SI = dict(c=_const.c, mu0=_const.mu_0, eps0=1.0 / (_const.mu_0 * _const.c**2),
           hbar=_const.hbar, e=_const.e)
_CGS = dict(c=_const.c * 100.0, mu0=1.0, eps0=1.0, hbar=_const.hbar * 1e7,
            e=_const.e * 10.0 * _const.c)
_NATURAL = dict(c=1.0, mu0=1.0, eps0=1.0, hbar=1.0, e=1.0)
DEFAULTS = {UnitSystem.SI: _SI, UnitSystem.CGS: _CGS, UnitSystem.NATURAL: _NATURAL}


@dataclass(frozen=True)
class CavityConfig:
    """Cavity geometry and vacuum constants.

    In NATURAL units c, eps0 and mu0 are forced to 1; in CGS eps0 and mu0 are
    forced to 1. Missing constants default per unit system.
    """

    L: float
    V: float
    c: float | None = None
    eps0: float | None = None
    mu0: float | None = None
    unit_system: UnitSystem = UnitSystem.NATURAL
    m_default: float = 1.0
    hbar: float | None = None
    e: float | None = None

    def __post_init__(self):
        units = UnitSystem(self.unit_system)
        object.__setattr__(self, "unit_system", units)
        defaults = DEFAULTS[units]
        for name in ("c", "eps0", "mu0", "hbar", "e"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, float(defaults[name]))
        if units is UnitSystem.NATURAL:
            for name in ("c", "eps0", "mu0"):
                object.__setattr__(self, name, 1.0)
        elif units is UnitSystem.CGS:
            object.__setattr__(self, "eps0", 1.0)
            object.__setattr__(self, "mu0", 1.0)
        for name in ("L", "V", "c", "eps0", "mu0", "m_default", "hbar", "e"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(name, f"must be a positive finite number, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def area(self) -> float:
        """Transverse cross-section, taken as V / L."""
        return self.V / self.L

    @property
    def wave_speed_mismatch(self) -> float:
        """|c^2 eps0 mu0 - 1|; zero when the curl equations propagate at c."""
        return abs(self.c**2 * self.eps0 * self.mu0 - 1.0)

    def require_field_units(self):
        """Field and Hamiltonian evaluation needs SI-form curl equations."""
        if self.unit_system is UnitSystem.CGS:
            raise ConfigError("unit_system", "field operations run in SI or NATURAL units")


@dataclass(frozen=True)
class ModeRecord:
    alpha: int
    k: float
    omega: float
    A: float
    m: float

    @property
    def nu(self) -> float:
        """Oscillator frequency of the canonical forms; identical to omega."""
        return self.omega


@dataclass(frozen=True)
class ModeSet:
    modes: tuple[ModeRecord, ...]
    config: CavityConfig = field(repr=False)

    def __post_init__(self):
        alphas = [m.alpha for m in self.modes]
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ConfigError("modes", "indices must be strictly increasing")

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def __getitem__(self, i):
        return self.modes[i]

    @property
    def k(self) -> np.ndarray:
        return np.array([m.k for m in self.modes])

    @property
    def omega(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes])

    @property
    def A(self) -> np.ndarray:
        return np.array([m.A for m in self.modes])

    @property
    def m(self) -> np.ndarray:
        return np.array([m.m for m in self.modes])


def make_mode(config: CavityConfig, alpha: int, m: float | None = None) -> ModeRecord:
    if int(alpha) != alpha or alpha < 1:
        raise ConfigError("alpha", f"mode index must be a positive integer, got {alpha!r}")
    alpha = int(alpha)
    m = config.m_default if m is None else m
    if not (math.isfinite(m) and m > 0):
        raise ConfigError("m", f"mass parameter must be positive, got {m!r}")
    k = alpha * math.pi / config.L
    omega = alpha * math.pi * config.c / config.L
    A = math.sqrt(2.0 * omega**2 * m / (config.V * config.eps0))
    return ModeRecord(alpha=alpha, k=k, omega=omega, A=A, m=float(m))


def build_mode_set(config: CavityConfig, n_modes: int, masses=None) -> ModeSet:
    """Modes alpha = 1..n_modes with k = alpha pi / L and omega = c k."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ConfigError("n_modes", f"must be a positive integer, got {n_modes!r}")
    n_modes = int(n_modes)
    if masses is not None:
        masses = list(masses)
        if len(masses) != n_modes:
            raise ConfigError("masses", f"expected {n_modes} entries, got {len(masses)}")
    else:
        masses = [None] * n_modes
    return ModeSet(tuple(make_mode(config, a, m) for a, m in zip(range(1, n_modes + 1), masses)),
                   config)


def mode_set_from_alphas(config: CavityConfig, alphas, masses=None) -> ModeSet:
    masses = [None] * len(alphas) if masses is None else list(masses)
    return ModeSet(tuple(make_mode(config, a, m) for a, m in zip(alphas, masses)), config)


def to_cgs(config: CavityConfig) -> tuple[CavityConfig, dict]:
    """Express ``config`` in CGS (eps0 = mu0 = 1).

    Returns the converted configuration and the multiplicative factors used,
    so that reports can record the conversion. NATURAL and CGS inputs pass
    through unchanged (eps0 = mu0 = 1 already).
    """
    if config.unit_system is not UnitSystem.SI:
        return config, {}
    factors = {
        "L": 100.0,             # m -> cm
        "V": 1e6,               # m^3 -> cm^3
        "c": 100.0,             # m/s -> cm/s
        "hbar": 1e7,            # J s -> erg s
        "e": 10.0 * _const.c,   # C -> statC
        "m_default": 1e3,       # kg -> g
    }
    converted = replace(
        config,
        unit_system=UnitSystem.CGS,
        L=config.L * factors["L"],
        V=config.V * factors["V"],
        c=config.c * factors["c"],
        hbar=config.hbar * factors["hbar"],
        e=config.e * factors["e"],
        m_default=config.m_default * factors["m_default"],
        eps0=None,
        mu0=None,
    )
    return converted, factors
