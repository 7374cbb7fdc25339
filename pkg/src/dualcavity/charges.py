"""Charge-density operators, their number-state expectations, the charge quantum
and the exchange-ratio comparison.

All evaluation happens with eps0 = mu0 = 1 (CGS); SI configurations are
converted on entry by ``to_cgs`` and the factors are recorded in reports.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy.integrate import simpson

from .config import CavityConfig, ConfigError, ModeRecord, ModeSet, mode_set_from_alphas, to_cgs
from .fock import (
    Family, FockLayout, FockSpace, OperatorMatrix, anticommutator, commutator, expectation,
    product_state,
)

DIRAC_UNIT = 68.5


class ChargeKind(str, enum.Enum):
    ELECTRIC = "ELECTRIC"
    MAGNETIC = "MAGNETIC"


def _per_mode(values, n, name):
    if np.ndim(values) == 0:
        return [float(values)] * n
    values = [float(v) for v in values]
    if len(values) != n:
        raise ConfigError(name, f"expected {n} entries, got {len(values)}")
    return values


def _ladders(layout: FockLayout, alpha: int, t: float, omega: float):
    try:
        a, ad = layout.ladder(alpha, Family.UNPRIMED)
        b, bd = layout.ladder(alpha, Family.PRIMED)
    except ConfigError:
        raise ConfigError("layout", f"mode {alpha} needs both unprimed and double-primed factors")
    ph = np.exp(-1j * omega * t)
    return a * ph, ad * np.conj(ph), b * ph, bd * np.conj(ph)


def electric_terms(mode: ModeRecord, layout: FockLayout, K1: float, K2: float,
                   config: CavityConfig, z: float, t: float, hbar: float, e: float):
    """The eight electric-density contributions of one mode, in the reference term order."""
    a, ad, b, bd = _ladders(layout, mode.alpha, t, mode.omega)
    w = 1j * e / hbar**2 * hbar * mode.omega / config.V
    p1 = w * K1 / config.eps0 * math.sin(mode.k * z) ** 2
    p2 = w * K2 / config.mu0 * math.cos(mode.k * z) ** 2
    sq = (ad @ ad) - (a @ a)
    sq2 = (bd @ bd) + (b @ b)
    return [
        p1 * commutator(ad, a),
        p1 * sq,
        p1 * commutator(bd, b),
        -p1 * sq2,
        -p2 * commutator(a, ad),
        p2 * sq,
        p2 * commutator(bd, b),
        -p2 * sq2,
    ]


def magnetic_terms(mode: ModeRecord, layout: FockLayout, K1: float, K2: float,
                   config: CavityConfig, z: float, t: float, hbar: float, e: float):
    a, ad, b, bd = _ladders(layout, mode.alpha, t, mode.omega)
    w = 1j * e / hbar**2 * hbar * mode.omega / config.V
    p1 = w * K1 / config.eps0 * math.sin(mode.k * z) ** 2
    p2 = w * K2 / config.mu0 * math.cos(mode.k * z) ** 2
    return [
        p1 * anticommutator(ad, b),
        p1 * anticommutator(a, bd),
        p2 * anticommutator(ad, b),
        p2 * anticommutator(a, bd),
    ]


def _electric_fast(mode, layout, K1, K2, config, z, t, hbar, e):
    # [a^+, a] = -[a, a^+], so both weights multiply one bracket
    a, ad, b, bd = _ladders(layout, mode.alpha, t, mode.omega)
    weight = (K1 / config.eps0 * math.sin(mode.k * z) ** 2
              + K2 / config.mu0 * math.cos(mode.k * z) ** 2)
    bracket = (commutator(ad, a).entries + commutator(bd, b).entries
               + (ad @ ad).entries - (a @ a).entries - (bd @ bd).entries - (b @ b).entries)
    return 1j * e * mode.omega / (hbar * config.V) * weight * bracket


def charge_density_operator(mode_set: ModeSet, space: FockSpace, K1, K2, config: CavityConfig,
                            kind, z: float, t: float = 0.0, layout: FockLayout | None = None,
                            fast: bool = False) -> OperatorMatrix:
    """Electric (j4^(1)) or magnetic (j4^(2)) charge-density operator at (z, t).

    ``config`` is converted to CGS first. The default layout holds both
    families of every mode. ``fast`` uses the simplified electric expression
    (same operator, one bracket per mode).
    """
    kind = ChargeKind(kind)
    cgs, factors = to_cgs(config)
    z = z * factors.get("L", 1.0)
    if not -1e-12 * cgs.L <= z <= cgs.L * (1 + 1e-12):
        raise ConfigError("z", f"must lie in [0, L], got {z!r}")
    config = cgs
    cgs_modes = _cgs_modes(mode_set, config)
    n = len(cgs_modes)
    K1 = _per_mode(K1, n, "K1")
    K2 = _per_mode(K2, n, "K2")
    if layout is None:
        layout = FockLayout.for_modes(space, [md.alpha for md in cgs_modes])
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for md, k1, k2 in zip(cgs_modes, K1, K2):
        if kind is ChargeKind.ELECTRIC and fast:
            total += _electric_fast(md, layout, k1, k2, config, z, t, config.hbar, config.e)
            continue
        build = electric_terms if kind is ChargeKind.ELECTRIC else magnetic_terms
        for term in build(md, layout, k1, k2, config, z, t, config.hbar, config.e):
            total += term.entries
    return OperatorMatrix(total)


def _cgs_modes(mode_set: ModeSet, config: CavityConfig) -> ModeSet:
    if config is mode_set.config:
        return mode_set
    scale = config.m_default / mode_set.config.m_default
    return mode_set_from_alphas(config, [md.alpha for md in mode_set],
                                [md.m * scale for md in mode_set])


def reference_electric_expectation(mode: ModeRecord, K1: float, K2: float, config: CavityConfig,
                                 z):
    """-(i e w / hbar V)[K1/eps0 sin^2 kz + K2/mu0 cos^2 kz], the reference closed form.

    Evaluated in CGS like the operator; ``z`` is in the units of ``config``.
    """
    cgs, factors = to_cgs(config)
    z = np.asarray(z, dtype=float) * factors.get("L", 1.0)
    md = _cgs_modes(ModeSet((mode,), config), cgs)[0]
    return -1j * cgs.e * md.omega / (cgs.hbar * cgs.V) * (
        K1 / cgs.eps0 * np.sin(md.k * z) ** 2 + K2 / cgs.mu0 * np.cos(md.k * z) ** 2)


def number_state_expectation(mode: ModeRecord, space: FockSpace, K1: float, K2: float,
                             config: CavityConfig, kind, z: float, t: float = 0.0,
                             n: int = 0, n_primed: int = 0) -> complex:
    """<n, n''| j4 |n, n''> for one mode on its two-factor space (CGS evaluation)."""
    layout = FockLayout.for_modes(space, [mode.alpha])
    op = charge_density_operator(ModeSet((mode,), config), space, K1, K2, config, kind, z, t,
                                 layout)
    return expectation(product_state(layout, [n, n_primed]), op)


def charge_quantum(mode: ModeRecord, K1: float, K2: float, e: float, hbar: float,
                   config: CavityConfig) -> tuple[float, float]:
    """(q_alpha, g) with q_alpha = (e w / 2 hbar)[K1/eps0 + K2/mu0] = g w."""
    if not (math.isfinite(K1) and math.isfinite(K2)):
        raise ConfigError("K", "K1 and K2 must be finite")
    g = e / (2.0 * hbar) * (K1 / config.eps0 + K2 / config.mu0)
    return g * mode.omega, g


def dirac_ratio_report(J_ratio_low: float, J_ratio_high: float, n: int = 2) -> dict:
    """g/e bounds sqrt(J_E/J_H) compared with the monopole value 68.5 n."""
    for name, v in (("J_ratio_low", J_ratio_low), ("J_ratio_high", J_ratio_high)):
        if not (math.isfinite(v) and v > 0):
            raise ConfigError(name, f"must be positive, got {v!r}")
    if J_ratio_low > J_ratio_high:
        raise ConfigError("J_ratio_low", "must not exceed J_ratio_high")
    lo, hi = math.sqrt(J_ratio_low), math.sqrt(J_ratio_high)
    dirac = DIRAC_UNIT * n
    mid = 0.5 * (lo + hi)
    return {
        "J_ratio_low": J_ratio_low,
        "J_ratio_high": J_ratio_high,
        "g_over_e_low": lo,
        "g_over_e_high": hi,
        "dirac_n": n,
        "dirac_value": dirac,
        "midpoint_relative_deviation": (mid - dirac) / dirac,
    }


def charge_report(mode_set: ModeSet, space: FockSpace, K1=1.0, K2=1.0, nz: int = 65,
                  J_ratio=(1.2e4, 1.6e4), n_dirac: int = 2) -> dict:
    """Vacuum electric-density profile, integrated charges, charge quanta, ratio summary.

    Density coefficients are the imaginary parts of <0, 0| j4^(1) |0, 0> summed
    over modes; each mode is evaluated on its own two-factor space (the
    operator is a sum of single-mode terms and the state is a product).
    """
    cfg, factors = to_cgs(mode_set.config)
    modes = _cgs_modes(mode_set, cfg)
    K1 = _per_mode(K1, len(modes), "K1")
    K2 = _per_mode(K2, len(modes), "K2")
    z = np.linspace(0.0, cfg.L, nz)
    per_mode = np.zeros((len(modes), nz))
    reference = np.zeros((len(modes), nz))
    for i, (md, k1, k2) in enumerate(zip(modes, K1, K2)):
        layout = FockLayout.for_modes(space, [md.alpha])
        vac = product_state(layout, [0, 0])
        single = ModeSet((md,), cfg)
        for j, zj in enumerate(z):
            op = charge_density_operator(single, space, k1, k2, cfg, ChargeKind.ELECTRIC,
                                         float(zj), 0.0, layout, fast=True)
            per_mode[i, j] = expectation(vac, op).imag
        reference[i] = reference_electric_expectation(md, k1, k2, cfg, z).imag

    quanta = [charge_quantum(md, k1, k2, cfg.e, cfg.hbar, cfg) for md, k1, k2 in zip(modes, K1, K2)]
    slopes = [g for _, g in quanta]
    uniform = all(g == slopes[0] for g in slopes)
    return {
        "unit_system": cfg.unit_system.value,
        "conversion_factors": factors,
        "modes": [
            {
                "alpha": md.alpha,
                "omega": md.omega,
                "K1": k1,
                "K2": k2,
                "charge_quantum": q,
                "g": g,
                "integrated_charge": float(cfg.area * simpson(per_mode[i], x=z)),
                "integrated_charge_reference": float(cfg.area * simpson(reference[i], x=z)),
            }
            for i, (md, k1, k2, (q, g)) in enumerate(zip(modes, K1, K2, quanta))
        ],
        "g": slopes[0] if uniform else None,
        "density_profile": [
            {"z": float(zj), "coeff": float(per_mode[:, j].sum()),
             "coeff_reference": float(reference[:, j].sum())}
            for j, zj in enumerate(z)
        ],
        "dirac": _dirac_section(dirac_ratio_report(J_ratio[0], J_ratio[1], n_dirac)),
    }


def _dirac_section(rep: dict) -> dict:
    return {"low": rep["g_over_e_low"], "high": rep["g_over_e_high"],
            "dirac_value": rep["dirac_value"], **rep}
