"""Classical mode amplitudes, the two partial field solutions and their energies.

Both partial solutions share the mode amplitude q(t) = C1 e^{iwt} + C2 e^{-iwt}.
The first uses Ex ~ q sin(kz), Hy ~ dq/dt cos(kz); the second is built from the
time antiderivative q'(t) and trades the canonical roles of E and H.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import kernels
from .config import CavityConfig, ModeRecord, ModeSet


class Solution(str, enum.Enum):
    SOL1 = "SOL1"
    SOL2 = "SOL2"
    COMBINED = "COMBINED"


class SingularFrequencyError(ZeroDivisionError):
    pass


class DomainError(ValueError):
    pass


class ResolutionWarning(UserWarning):
    pass


REAL_RTOL = 1e-12


@dataclass(frozen=True)
class ClassicalModeState:
    C1: complex
    C2: complex

    def __post_init__(self):
        object.__setattr__(self, "C1", complex(self.C1))
        object.__setattr__(self, "C2", complex(self.C2))

    @classmethod
    def real(cls, C1: complex) -> "ClassicalModeState":
        """Real-field configuration, C2 = conj(C1)."""
        C1 = complex(C1)
        return cls(C1, C1.conjugate())

    @property
    def is_real(self) -> bool:
        scale = max(abs(self.C1), abs(self.C2))
        return abs(self.C2 - self.C1.conjugate()) <= REAL_RTOL * scale


VACUUM = ClassicalModeState(0.0, 0.0)


def _check_omega(omega):
    if omega == 0:
        raise SingularFrequencyError("antiderivative of q is singular at omega = 0")


def eval_q(state: ClassicalModeState, omega: float, t):
    """q(t) = C1 e^{iwt} + C2 e^{-iwt}; ``t`` may be an array."""
    ph = np.exp(1j * omega * np.asarray(t, dtype=float))
    return state.C1 * ph + state.C2 / ph


def eval_dq(state: ClassicalModeState, omega: float, t):
    ph = np.exp(1j * omega * np.asarray(t, dtype=float))
    return 1j * omega * (state.C1 * ph - state.C2 / ph)


def eval_d2q(state: ClassicalModeState, omega: float, t):
    return -omega**2 * eval_q(state, omega, t)


def eval_q_prime(state: ClassicalModeState, omega: float, t):
    """Antiderivative of q with lower limit 0: q'(0) = 0."""
    _check_omega(omega)
    ph = np.exp(1j * omega * np.asarray(t, dtype=float))
    return (state.C1 * (ph - 1.0) + state.C2 * (1.0 - 1.0 / ph)) / (1j * omega)


def q_prime_offset(state: ClassicalModeState, omega: float) -> complex:
    """Constant separating the purely oscillating antiderivative from ``eval_q_prime``."""
    _check_omega(omega)
    return (state.C1 - state.C2) / (1j * omega)


def eval_q_prime_oscillating(state: ClassicalModeState, omega: float, t):
    """Antiderivative of q without a secular constant.

    Equals ``eval_q_prime + q_prime_offset``. The second partial solution
    satisfies both curl equations only with this choice (a constant left in
    q' produces a static H component with nonzero curl).
    """
    _check_omega(omega)
    ph = np.exp(1j * omega * np.asarray(t, dtype=float))
    return (state.C1 * ph - state.C2 / ph) / (1j * omega)


def eval_f_alpha(state: ClassicalModeState, mode: ModeRecord, z, t, config: CavityConfig):
    """A cos(kz) [(k/mu0) q'(t) - (eps0/k) dq/dt], with q' from ``eval_q_prime``.

    Adding the sum of these to the first-solution Hy reproduces the
    second-solution magnetic field with the positive sign convention; kept as a
    cross-check of the construction.
    """
    qp = eval_q_prime(state, mode.omega, t)
    dq = eval_dq(state, mode.omega, t)
    return mode.A * np.cos(mode.k * np.asarray(z, dtype=float)) * (
        (mode.k / config.mu0) * qp - (config.eps0 / mode.k) * dq
    )


def canonical_pair(state: ClassicalModeState, mode: ModeRecord, which, t):
    """(q, p) for SOL1, (q'', p'') = (nu q', m nu dq'/dt) for SOL2."""
    which = Solution(which)
    if which is Solution.SOL1:
        return eval_q(state, mode.omega, t), mode.m * eval_dq(state, mode.omega, t)
    if which is Solution.SOL2:
        q2 = mode.nu * eval_q_prime_oscillating(state, mode.omega, t)
        p2 = mode.m * mode.nu * eval_q(state, mode.omega, t)
        return q2, p2
    raise ValueError("canonical variables exist for SOL1 and SOL2 only")


def _states_for(states, mode_set: ModeSet):
    states = list(states)
    if len(states) != len(mode_set):
        raise ValueError(f"expected {len(mode_set)} mode states, got {len(states)}")
    return states


def field_coefficients(states, mode_set: ModeSet, which, t):
    """Per-mode time coefficients (e, h) with Ex = sum e sin(kz), Hy = sum h cos(kz).

    Shapes are (n_modes, n_t). COMBINED is E1 + i E2 and H2 + i H1.
    """
    which = Solution(which)
    cfg = mode_set.config
    t = np.atleast_1d(np.asarray(t, dtype=float))
    states = _states_for(states, mode_set)
    e = np.empty((len(mode_set), t.size), dtype=complex)
    h = np.empty_like(e)
    for i, (s, md) in enumerate(zip(states, mode_set)):
        e1 = md.A * eval_q(s, md.omega, t)
        h1 = md.A * (cfg.eps0 / md.k) * eval_dq(s, md.omega, t)
        # dq'/dt = q, so E2 carries the same time factor as E1
        e2 = e1
        h2 = -(md.k * md.A / cfg.mu0) * eval_q_prime_oscillating(s, md.omega, t)
        if which is Solution.SOL1:
            e[i], h[i] = e1, h1
        elif which is Solution.SOL2:
            e[i], h[i] = e2, h2
        else:
            e[i], h[i] = e1 + 1j * e2, h2 + 1j * h1
    return e, h


def _check_z(z, L):
    z = np.atleast_1d(np.asarray(z, dtype=float))
    slack = 1e-12 * L
    if np.any(z < -slack) or np.any(z > L + slack):
        raise DomainError(f"z must lie in [0, L] = [0, {L}]")
    return z


def eval_field_grid(states, mode_set: ModeSet, which, z, t):
    """Ex, Hy on the (z, t) grid, each of shape (len(z), len(t))."""
    mode_set.config.require_field_units()
    z = _check_z(z, mode_set.config.L)
    e, h = field_coefficients(states, mode_set, which, t)
    k = mode_set.k
    return kernels.mode_sum(z, k, e, 0), kernels.mode_sum(z, k, h, 1)


@dataclass(frozen=True)
class FieldSample:
    z: float
    t: float
    Ex: complex
    Hy: complex
    which: Solution


def eval_field(states, mode_set: ModeSet, which, z: float, t: float) -> FieldSample:
    Ex, Hy = eval_field_grid(states, mode_set, which, [z], [t])
    return FieldSample(float(z), float(t), complex(Ex[0, 0]), complex(Hy[0, 0]), Solution(which))


def hamiltonian_canonical(states, mode_set: ModeSet, which, t):
    """(1/2) sum [m nu^2 q^2 + p^2 / m]; complex in general, real for real fields."""
    mode_set.config.require_field_units()
    total = 0.0
    for s, md in zip(_states_for(states, mode_set), mode_set):
        q, p = canonical_pair(s, md, which, t)
        total = total + 0.5 * (md.m * md.nu**2 * q * q + p * p / md.m)
    return total


def hamiltonian_integral(states, mode_set: ModeSet, which, t, n_quadrature: int = 4096):
    """(1/2) integral of eps0 Ex^2 + mu0 Hy^2 over the cavity (composite Simpson in z).

    ``n_quadrature`` is the number of z intervals (rounded up to even).
    """
    cfg = mode_set.config
    alpha_max = max(md.alpha for md in mode_set)
    if n_quadrature < 8 * alpha_max:
        warnings.warn(
            f"n_quadrature={n_quadrature} below 8 * alpha_max = {8 * alpha_max}",
            ResolutionWarning, stacklevel=2,
        )
    n = int(n_quadrature) + (int(n_quadrature) % 2)
    z = np.linspace(0.0, cfg.L, n + 1)
    scalar = np.ndim(t) == 0
    Ex, Hy = eval_field_grid(states, mode_set, which, z, np.atleast_1d(t))
    density = 0.5 * (cfg.eps0 * Ex * Ex + cfg.mu0 * Hy * Hy)
    energy = cfg.area * simpson(density, x=z, axis=0)
    return energy[0] if scalar else energy


def maxwell_residuals(states, mode_set: ModeSet, which, nz: int = 2000, nt: int = 1000,
                      t_span: float | None = None, dz: float | None = None,
                      dt: float | None = None, impl=None):
    """Relative central-difference residuals of the two curl equations.

    Grid: ``nz`` interior points in (0, L) and ``nt`` times over ``t_span``
    (default one period of the lowest mode). Space step defaults to L/2000,
    time step to 1e-4 / omega_max. Each residual is max|a + b| divided by
    max|a| + max|b| for the balance a + b = 0.
    """
    cfg = mode_set.config
    cfg.require_field_units()
    impl = impl or kernels
    omega_max = float(np.max(mode_set.omega))
    dz = cfg.L / 2000.0 if dz is None else dz
    dt = 1e-4 / omega_max if dt is None else dt
    t_span = 2.0 * math.pi / float(np.min(mode_set.omega)) if t_span is None else t_span
    z = np.linspace(0.0, cfg.L, nz + 2)[1:-1]
    t = np.linspace(0.0, t_span, nt, endpoint=False)
    e_m, h_m = field_coefficients(states, mode_set, which, t - dt)
    e_0, h_0 = field_coefficients(states, mode_set, which, t)
    e_p, h_p = field_coefficients(states, mode_set, which, t + dt)
    r2, a2, b2, r4, a4, b4 = impl.maxwell_residual(
        z, dz, mode_set.k, e_m, e_0, e_p, h_m, h_0, h_p, dt, cfg.eps0, cfg.mu0)

    def rel(r, a, b):
        scale = a + b
        return 0.0 if scale == 0 else r / scale

    return {"ampere": rel(r2, a2, b2), "faraday": rel(r4, a4, b4)}
