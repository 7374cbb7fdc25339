"""Lagrangian density, the two gauge currents and their divergence.

Field components per mode: u1 = A q(t) sin(kz), u2 = A q(t) cos(kz). The
fourth coordinate is x4 = i c t, so d/dx4 = (1/(ic)) d/dt. Derivatives of the
Lagrangian with respect to d_mu u are c^2 (d_mu u)^*.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .classical import ClassicalModeState, ResolutionWarning
from .config import ModeSet


class FieldComponents:
    """Analytic u^j_alpha(z, t) and their space-time derivatives.

    ``amplitudes`` overrides the per-mode A_alpha of ``mode_set``.
    """

    def __init__(self, mode_set: ModeSet, states, amplitudes=None):
        states = list(states)
        if len(states) != len(mode_set):
            raise ValueError(f"expected {len(mode_set)} mode states, got {len(states)}")
        self.mode_set = mode_set
        self.c = mode_set.config.c
        self.k = mode_set.k
        self.omega = mode_set.omega
        self.A = mode_set.A if amplitudes is None else np.asarray(amplitudes, dtype=float)
        if self.A.shape != self.k.shape:
            raise ValueError("one amplitude per mode required")
        self.C1 = np.array([s.C1 for s in states])
        self.C2 = np.array([s.C2 for s in states])

    @classmethod
    def plane_wave(cls, mode_set: ModeSet, amplitudes=None) -> "FieldComponents":
        """q_alpha(t) = exp(i omega_alpha t) for every mode."""
        return cls(mode_set, [ClassicalModeState(1.0, 0.0)] * len(mode_set), amplitudes)

    def _time(self, t):
        t = np.asarray(t, dtype=float)
        w = self.omega.reshape((-1,) + (1,) * t.ndim)
        ph = np.exp(1j * w * t)
        c1 = self.C1.reshape(w.shape)
        c2 = self.C2.reshape(w.shape)
        q = c1 * ph + c2 / ph
        dq = 1j * w * (c1 * ph - c2 / ph)
        return q, dq

    def _space(self, z):
        z = np.asarray(z, dtype=float)
        k = self.k.reshape((-1,) + (1,) * z.ndim)
        return np.sin(k * z), np.cos(k * z), k

    def _grid(self, z, t):
        z, t = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
        q, dq = self._time(t)
        s, c, k = self._space(z)
        a = self.A.reshape((-1,) + (1,) * z.ndim)
        return a, q, dq, s, c, k

    def u(self, z, t):
        """Array of shape (n_modes, 2, *broadcast(z, t).shape)."""
        a, q, _, s, c, _ = self._grid(z, t)
        return np.stack([a * q * s, a * q * c], axis=1)

    def du_dz(self, z, t):
        a, q, _, s, c, k = self._grid(z, t)
        return np.stack([a * q * k * c, -a * q * k * s], axis=1)

    def du_dt(self, z, t):
        a, _, dq, s, c, _ = self._grid(z, t)
        return np.stack([a * dq * s, a * dq * c], axis=1)

    def four_gradient(self, z, t):
        """d u / d x_mu for mu = 1..4 stacked on a leading axis."""
        dz = self.du_dz(z, t)
        zero = np.zeros_like(dz)
        return np.stack([zero, zero, dz, self.du_dt(z, t) / (1j * self.c)])


def lagrangian_density(fc: FieldComponents, z, t):
    """(1/2) sum c^2 d_mu u (d_mu u)^* - (1/2) sum_{j, mu, alpha} omega^2 u u^*.

    The mass term carries the same sum over mu = 1..4 as the gradient term.
    """
    grad = fc.four_gradient(z, t)
    u = fc.u(z, t)
    kinetic = 0.5 * fc.c**2 * np.sum(grad * grad.conj(), axis=(0, 1, 2))
    w2 = (fc.omega**2).reshape((-1, 1) + (1,) * (u.ndim - 2))
    mass = 0.5 * 4 * np.sum(w2 * u * u.conj(), axis=(0, 1))
    return np.real_if_close(kinetic - mass, tol=1e4)


@dataclass(frozen=True)
class CurrentSample:
    """Both gauge currents at one or more points; component axis first (mu = 1..4)."""

    j1: np.ndarray
    j2: np.ndarray
    S: np.ndarray
    T: np.ndarray

    @property
    def j_total(self) -> np.ndarray:
        return self.j1 + 1j * self.j2


def conjugate_sums(fc: FieldComponents, z, t):
    """S_mu = sum dL/d(d_mu u) u and T_mu = sum dL/d(d_mu u)^* u^*."""
    grad = fc.four_gradient(z, t)
    u = fc.u(z, t)[None]
    S = fc.c**2 * np.sum(grad.conj() * u, axis=(1, 2))
    T = fc.c**2 * np.sum(grad * u.conj(), axis=(1, 2))
    return S, T


def noether_currents(fc: FieldComponents, e: float, hbar: float, z, t) -> CurrentSample:
    """j1 = -(ie / hbar c)(S - T), j2 = -(e / hbar c)(S + T)."""
    S, T = conjugate_sums(fc, z, t)
    pref = e / (hbar * fc.c)
    return CurrentSample(j1=-1j * pref * (S - T), j2=-pref * (S + T), S=S, T=T)


def plane_wave_charge(mode_set: ModeSet, e: float, hbar: float, amplitudes=None) -> float:
    """Closed-form fourth component of j2 for q = exp(i w t): -(2 e c / hbar) sum A^2 w.

    Only the c = 1 case coincides with the component computed by
    ``noether_currents`` (x4 = i c t supplies 1/c); see ``plane_wave_charge_x4``.
    """
    A = mode_set.A if amplitudes is None else np.asarray(amplitudes, dtype=float)
    return float(-(2.0 * e * mode_set.config.c / hbar) * np.sum(A**2 * mode_set.omega))


def plane_wave_charge_x4(mode_set: ModeSet, e: float, hbar: float, amplitudes=None) -> float:
    """Fourth component of j2 for q = exp(i w t) with x4 = i c t: -(2 e / hbar) sum A^2 w."""
    A = mode_set.A if amplitudes is None else np.asarray(amplitudes, dtype=float)
    return float(-(2.0 * e / hbar) * np.sum(A**2 * mode_set.omega))


def current_scale(sample: CurrentSample) -> float:
    return float(max(np.max(np.abs(sample.j1)), np.max(np.abs(sample.j2)), 0.0))


def continuity_residual(fc: FieldComponents, e: float, hbar: float, nz: int = 64,
                        nt: int = 64, t_span: float | None = None, which: str = "total"):
    """max |d_mu j_mu| over a (z, t) grid by central differences, relative.

    The grid has ``nz`` interior points of (0, L) and ``nt`` times spanning
    ``t_span`` (default one period of the lowest mode); steps equal the grid
    spacings. The divergence is divided by max|j| * max(k, omega / c).
    ``which`` selects ``"j1"``, ``"j2"`` or ``"total"`` (j1 + i j2).
    """
    L = fc.mode_set.config.L
    c = fc.c
    t_span = 2.0 * math.pi / float(np.min(fc.omega)) if t_span is None else t_span
    hz = L / (nz + 1)
    ht = t_span / nt
    lam_min = 2.0 * L / max(md.alpha for md in fc.mode_set)
    period_min = 2.0 * math.pi / float(np.max(fc.omega))
    if hz > lam_min / 16 or ht > period_min / 16:
        warnings.warn("continuity grid resolves the highest mode with fewer than 16 points",
                      ResolutionWarning, stacklevel=2)
    z = (np.arange(nz) + 1.0) * hz
    t = np.arange(nt) * ht
    Z, T = np.meshgrid(z, t, indexing="ij")

    def pick(sample):
        if which == "j1":
            return sample.j1
        if which == "j2":
            return sample.j2
        if which == "total":
            return sample.j_total
        raise ValueError(f"unknown current {which!r}")

    j0 = pick(noether_currents(fc, e, hbar, Z, T))
    jzp = pick(noether_currents(fc, e, hbar, Z + hz, T))[2]
    jzm = pick(noether_currents(fc, e, hbar, Z - hz, T))[2]
    jtp = pick(noether_currents(fc, e, hbar, Z, T + ht))[3]
    jtm = pick(noether_currents(fc, e, hbar, Z, T - ht))[3]
    div = (jzp - jzm) / (2 * hz) + (jtp - jtm) / (2 * ht) / (1j * c)
    scale = float(np.max(np.abs(j0))) * max(float(np.max(fc.k)), float(np.max(fc.omega)) / c)
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(div)) / scale)


def current_grid(fc: FieldComponents, e: float, hbar: float, z, t):
    """Currents on the outer-product grid of ``z`` and ``t``: arrays (4, nz, nt)."""
    Z, T = np.meshgrid(np.asarray(z, float), np.asarray(t, float), indexing="ij")
    return Z, T, noether_currents(fc, e, hbar, Z, T)
