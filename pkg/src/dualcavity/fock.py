"""Truncated Fock-space operators for both partial-solution families.

Every single-factor operator lives on levels 0..N-1. Truncation breaks the
canonical commutator on the top level only, so identity checks restrict to the
interior block 0..N-2 (see ``interior``).

Multi-factor spaces are Kronecker products ordered by mode index, the
unprimed family before the double-primed one for each mode.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .classical import DomainError
from .config import CapabilityError, CavityConfig, ConfigError, ModeRecord, ModeSet
from .expm import expm_pade13

MAX_LEVELS = 64
MAX_DIM = 4096
HERMITIAN_RTOL = 1e-12


class TruncationError(ValueError):
    pass


class Family(str, enum.Enum):
    UNPRIMED = "UNPRIMED"
    PRIMED = "PRIMED"  # the double-primed (second-solution) operators


class FieldKind(str, enum.Enum):
    E1 = "E1"
    H1 = "H1"
    E2 = "E2"
    H2 = "H2"
    E_COMBINED = "E_COMBINED"
    H_COMBINED = "H_COMBINED"


@dataclass(frozen=True)
class FockSpace:
    n_levels: int

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise TruncationError(f"n_levels must be an integer >= 2, got {self.n_levels!r}")
        if self.n_levels > MAX_LEVELS:
            raise CapabilityError(f"n_levels={self.n_levels} exceeds supported {MAX_LEVELS}")
        object.__setattr__(self, "n_levels", int(self.n_levels))


def _is_hermitian(m: np.ndarray, rtol=HERMITIAN_RTOL) -> bool:
    scale = np.max(np.abs(m)) if m.size else 0.0
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= rtol * scale)


class OperatorMatrix:
    """Dense complex operator with a Hermiticity flag.

    ``hermitian=None`` detects the flag numerically; an explicit ``True`` is
    validated against the entries.
    """

    __slots__ = ("entries", "hermitian")

    def __init__(self, entries, hermitian: bool | None = None):
        m = np.array(entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        m.setflags(write=False)
        if hermitian is None:
            hermitian = _is_hermitian(m)
        elif hermitian and not _is_hermitian(m):
            raise ValueError("entries are not hermitian within tolerance")
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "hermitian", bool(hermitian))

    def __setattr__(self, name, value):
        raise AttributeError("OperatorMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self):
        return f"OperatorMatrix(dim={self.dim}, hermitian={self.hermitian})"

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.hermitian)

    def _other(self, other):
        return other.entries if isinstance(other, OperatorMatrix) else other

    def __matmul__(self, other):
        return OperatorMatrix(self.entries @ self._other(other))

    def __add__(self, other):
        return OperatorMatrix(self.entries + self._other(other))

    def __sub__(self, other):
        return OperatorMatrix(self.entries - self._other(other))

    def __mul__(self, scalar):
        return OperatorMatrix(self.entries * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return OperatorMatrix(-self.entries, self.hermitian)

    def __truediv__(self, scalar):
        return OperatorMatrix(self.entries / scalar)

    def interior(self) -> np.ndarray:
        """Block on levels 0..N-2 (single-factor operators)."""
        return self.entries[:-1, :-1]

    def to_json(self) -> dict:
        flat = self.entries.ravel()
        return {
            "dim": self.dim,
            "entries": [[float(z.real), float(z.imag)] for z in flat],
            "hermitian": self.hermitian,
        }

    @classmethod
    def from_json(cls, doc) -> "OperatorMatrix":
        if isinstance(doc, str):
            doc = json.loads(doc)
        dim = int(doc["dim"])
        flat = np.array([complex(re, im) for re, im in doc["entries"]])
        if flat.size != dim * dim:
            raise ValueError(f"expected {dim * dim} entries, got {flat.size}")
        return cls(flat.reshape(dim, dim), bool(doc["hermitian"]))


def commutator(x: OperatorMatrix, y: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(x.entries @ y.entries - y.entries @ x.entries)


def anticommutator(x: OperatorMatrix, y: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(x.entries @ y.entries + y.entries @ x.entries)


def identity(dim: int) -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim), True)


def ladder_pair(space: FockSpace) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Annihilation a (a[n-1, n] = sqrt(n)) and creation a^dagger.

    The same matrices serve the double-primed family.
    """
    a = np.diag(np.sqrt(np.arange(1, space.n_levels, dtype=float)), 1)
    return OperatorMatrix(a, False), OperatorMatrix(a.T, False)


def number_operator(space: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.arange(space.n_levels, dtype=float)), True)


def commutator_defect(space: FockSpace) -> np.ndarray:
    """[a, a^dagger] - I: zero except -N at the top level."""
    a, ad = ladder_pair(space)
    return commutator(a, ad).entries - np.eye(space.n_levels)


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(name, f"must be positive, got {value!r}")


def canonical_ops(space: FockSpace, m: float, omega: float, hbar: float,
                  family=Family.UNPRIMED) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Coordinate and momentum operators built from the ladder pair.

    q = sqrt(hbar / 2 m w) (a^dagger + a) and p = i sqrt(hbar m w / 2) (a - a^dagger),
    so that [p, q] = i hbar on the interior levels. Both families share this form.
    """
    Family(family)
    _positive("m", m)
    _positive("omega", omega)
    _positive("hbar", hbar)
    a, ad = ladder_pair(space)
    q = math.sqrt(hbar / (2.0 * m * omega)) * (ad.entries + a.entries)
    p = 1j * math.sqrt(hbar * m * omega / 2.0) * (a.entries - ad.entries)
    return OperatorMatrix(q, True), OperatorMatrix(p, True)


def hamiltonian_operator(mode: ModeRecord, space: FockSpace, hbar: float,
                         family=Family.UNPRIMED) -> OperatorMatrix:
    """(1/2)[m w^2 q^2 + p^2 / m]; spectrum hbar w (n + 1/2) on levels 0..N-2."""
    q, p = canonical_ops(space, mode.m, mode.omega, hbar, family)
    h = 0.5 * (mode.m * mode.omega**2 * (q.entries @ q.entries)
               + (p.entries @ p.entries) / mode.m)
    return OperatorMatrix(0.5 * (h + h.conj().T), True)


def spectrum(op: OperatorMatrix, interior: bool = True) -> np.ndarray:
    """Ascending eigenvalues of a hermitian operator (interior block by default)."""
    m = op.interior() if interior else op.entries
    return np.linalg.eigvalsh(m)


@dataclass(frozen=True)
class FockLayout:
    """Tensor-product layout: one factor per (mode index, family)."""

    space: FockSpace
    factors: tuple[tuple[int, Family], ...]

    def __post_init__(self):
        factors = tuple((int(a), Family(f)) for a, f in self.factors)
        if len(set(factors)) != len(factors):
            raise ValueError("duplicate factor in layout")
        object.__setattr__(self, "factors", tuple(sorted(
            factors, key=lambda af: (af[0], af[1] is Family.PRIMED))))
        if self.dim > MAX_DIM:
            raise CapabilityError(
                f"tensor dimension {self.dim} exceeds supported {MAX_DIM}")

    @property
    def dim(self) -> int:
        return self.space.n_levels ** len(self.factors)

    @classmethod
    def for_modes(cls, space: FockSpace, alphas, families=(Family.UNPRIMED, Family.PRIMED)):
        return cls(space, tuple((a, f) for a in alphas for f in families))

    def index(self, alpha: int, family) -> int:
        try:
            return self.factors.index((int(alpha), Family(family)))
        except ValueError:
            raise ConfigError("layout", f"no factor for mode {alpha} family {Family(family).value}")

    def embed(self, op, alpha: int, family) -> OperatorMatrix:
        """Place a single-factor operator on its factor, identity elsewhere."""
        m = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op)
        pos = self.index(alpha, family)
        n = self.space.n_levels
        left = n ** pos
        right = n ** (len(self.factors) - pos - 1)
        out = np.kron(np.kron(np.eye(left), m), np.eye(right))
        herm = op.hermitian if isinstance(op, OperatorMatrix) else None
        return OperatorMatrix(out, herm)

    def ladder(self, alpha: int, family) -> tuple[OperatorMatrix, OperatorMatrix]:
        a, ad = ladder_pair(self.space)
        return self.embed(a, alpha, family), self.embed(ad, alpha, family)


_DEFAULT_FAMILIES = {
    FieldKind.E1: (Family.UNPRIMED,),
    FieldKind.H1: (Family.UNPRIMED,),
    FieldKind.E2: (Family.PRIMED,),
    FieldKind.H2: (Family.PRIMED,),
    FieldKind.E_COMBINED: (Family.UNPRIMED, Family.PRIMED),
    FieldKind.H_COMBINED: (Family.UNPRIMED, Family.PRIMED),
}


def _field_matrix(kind: FieldKind, mode: ModeRecord, layout: FockLayout,
                  config: CavityConfig, hbar: float, z: float, t: float) -> np.ndarray:
    se = math.sqrt(hbar * mode.omega / (config.V * config.eps0)) * math.sin(mode.k * z)
    sh = math.sqrt(hbar * mode.omega / (config.V * config.mu0)) * math.cos(mode.k * z)
    ph = np.exp(-1j * mode.omega * t)

    def pair(family):
        a, ad = layout.ladder(mode.alpha, family)
        return a.entries * ph, ad.entries * np.conj(ph)

    if kind is FieldKind.E1:
        a, ad = pair(Family.UNPRIMED)
        return se * (ad + a)
    if kind is FieldKind.H1:
        a, ad = pair(Family.UNPRIMED)
        return 1j * sh * (ad - a)
    if kind is FieldKind.E2:
        a2, ad2 = pair(Family.PRIMED)
        return 1j * se * (ad2 - a2)
    if kind is FieldKind.H2:
        a2, ad2 = pair(Family.PRIMED)
        return -sh * (ad2 + a2)
    if kind is FieldKind.E_COMBINED:
        return (_field_matrix(FieldKind.E1, mode, layout, config, hbar, z, t)
                + 1j * _field_matrix(FieldKind.E2, mode, layout, config, hbar, z, t))
    return (_field_matrix(FieldKind.H2, mode, layout, config, hbar, z, t)
            + 1j * _field_matrix(FieldKind.H1, mode, layout, config, hbar, z, t))


def field_operator(mode: ModeRecord, space: FockSpace, config: CavityConfig, which,
                   z: float, t: float, layout: FockLayout | None = None,
                   hbar: float | None = None) -> OperatorMatrix:
    """Single-mode field operator at (z, t) with a(t) = a e^{-iwt}.

    Without ``layout`` the operator acts on the factors it needs: one factor
    for E1/H1 (unprimed) or E2/H2 (double-primed), two for the combined forms.
    Combined operators follow E1 + i E2 and H2 + i H1.
    """
    kind = FieldKind(which)
    if not -1e-12 * config.L <= z <= config.L * (1 + 1e-12):
        raise DomainError(f"z must lie in [0, L] = [0, {config.L}]")
    hbar = config.hbar if hbar is None else hbar
    if layout is None:
        layout = FockLayout(space, tuple((mode.alpha, f) for f in _DEFAULT_FAMILIES[kind]))
    m = _field_matrix(kind, mode, layout, config, hbar, z, t)
    herm = kind not in (FieldKind.E_COMBINED, FieldKind.H_COMBINED)
    return OperatorMatrix(m, herm if herm else None)


def field_operator_sum(mode_set: ModeSet, space: FockSpace, which, z: float, t: float,
                       hbar: float | None = None) -> OperatorMatrix:
    """Mode sum of ``field_operator`` on the joint layout of ``mode_set``."""
    kind = FieldKind(which)
    layout = FockLayout.for_modes(space, [md.alpha for md in mode_set],
                                  _DEFAULT_FAMILIES[kind])
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for md in mode_set:
        total += field_operator(md, space, mode_set.config, kind, z, t, layout, hbar).entries
    return OperatorMatrix(total)


def heisenberg(op: OperatorMatrix, hamiltonian: OperatorMatrix, t: float, hbar: float,
               interior: bool = True) -> np.ndarray:
    """U^dagger op U with U = exp(-i H t / hbar), on the interior block by default."""
    o = op.interior() if interior else op.entries
    h = hamiltonian.interior() if interior else hamiltonian.entries
    u = expm_pade13(-1j * h * t / hbar)
    return u.conj().T @ o @ u


class FockState:
    """Normalized state vector in the number basis."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients, normalize: bool = False):
        v = np.array(coefficients, dtype=np.complex128).ravel()
        norm = np.linalg.norm(v)
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            v = v / norm
        elif abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm!r} differs from 1")
        v.setflags(write=False)
        self.coefficients = v

    @property
    def dim(self) -> int:
        return self.coefficients.size


def number_state(dim: int, n: int) -> FockState:
    if not 0 <= n < dim:
        raise ValueError(f"level {n} outside 0..{dim - 1}")
    v = np.zeros(dim)
    v[n] = 1.0
    return FockState(v)


def product_state(layout: FockLayout, levels) -> FockState:
    """Number state with ``levels[i]`` quanta in factor i of ``layout``."""
    levels = list(levels)
    if len(levels) != len(layout.factors):
        raise ValueError(f"expected {len(layout.factors)} levels, got {len(levels)}")
    v = np.ones(1)
    for n in levels:
        v = np.kron(v, number_state(layout.space.n_levels, n).coefficients)
    return FockState(v)


def coherent_state(space: FockSpace, amplitude: complex) -> FockState:
    """Truncated coherent state sum_n amplitude^n / sqrt(n!) |n>, renormalized."""
    n = np.arange(space.n_levels)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    amplitude = complex(amplitude)
    if amplitude == 0:
        return number_state(space.n_levels, 0)
    mag = np.exp(n * math.log(abs(amplitude)) - 0.5 * log_fact)
    v = mag * np.exp(1j * n * np.angle(amplitude))
    return FockState(v, normalize=True)


def expectation(state: FockState, op: OperatorMatrix) -> complex:
    """<psi| op |psi>."""
    if state.dim != op.dim:
        raise ValueError(f"state dimension {state.dim} does not match operator {op.dim}")
    v = state.coefficients
    return complex(np.vdot(v, op.entries @ v))
