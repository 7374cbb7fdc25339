import math
import warnings

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from dualcavity import currents as cu
from dualcavity.classical import ClassicalModeState, ResolutionWarning
from dualcavity.config import CavityConfig, build_mode_set
from conftest import random_real_states


def _sympy_lagrangian(A, k, w, c, z0, t0):
    # independent substitution: same quadratic form written out symbolically
    z, t = sp.symbols("z t", real=True)
    A_, k_, w_, c_ = (sp.nsimplify(x) for x in (A, k, w, c))
    q = sp.exp(sp.I * w_ * t)
    us = [A_ * q * sp.sin(k_ * z), A_ * q * sp.cos(k_ * z)]
    dens = 0
    for u in us:
        grads = [sp.diff(u, z), sp.diff(u, t) / (sp.I * c_)]
        dens += sp.Rational(1, 2) * c_**2 * sum(g * sp.conjugate(g) for g in grads)
        dens -= sp.Rational(1, 2) * 4 * w_**2 * u * sp.conjugate(u)
    return complex(sp.N(dens.subs({z: z0, t: t0}), 30))


def test_lagrangian_vacuum(natural, three_modes):
    fc = cu.FieldComponents(three_modes, [ClassicalModeState(0, 0)] * 3)
    assert cu.lagrangian_density(fc, 0.4, 0.2) == 0


@pytest.mark.parametrize("point", [(0.3, 0.0), (1.1, 2.7), (2.9, -1.0)])
def test_lagrangian_symbolic_oracle(natural, point):
    ms = build_mode_set(natural, 1)
    fc = cu.FieldComponents.plane_wave(ms)
    md = ms[0]
    expected = _sympy_lagrangian(md.A, md.k, md.omega, natural.c, *point)
    got = cu.lagrangian_density(fc, *point)
    assert got == pytest.approx(expected.real, abs=1e-13)
    assert abs(expected.imag) < 1e-25
    assert got == pytest.approx(-2.0, abs=1e-13)


def test_lagrangian_scaling(natural, three_modes, rng):
    states = random_real_states(rng, 3)
    fc = cu.FieldComponents(three_modes, states)
    fc2 = cu.FieldComponents(three_modes, [ClassicalModeState(2 * s.C1, 2 * s.C2) for s in states])
    z, t = np.linspace(0.1, 3, 5), np.linspace(0, 2, 5)
    np.testing.assert_allclose(cu.lagrangian_density(fc2, z, t), 4 * cu.lagrangian_density(fc, z, t),
                               rtol=1e-13)


def test_lagrangian_real(natural, three_modes, rng):
    fc = cu.FieldComponents(three_modes, random_real_states(rng, 3))
    val = cu.lagrangian_density(fc, np.linspace(0.1, 3, 7), 0.8)
    assert np.isrealobj(val)


def test_single_mode_plane_wave_value(natural):
    ms = build_mode_set(natural, 1)
    cur = cu.noether_currents(cu.FieldComponents.plane_wave(ms), 1.0, 1.0, 0.7, 1.9)
    assert cur.j2[3].real == pytest.approx(-4.0, rel=1e-12)
    assert cu.plane_wave_charge(ms, 1.0, 1.0) == pytest.approx(-4.0)


@settings(max_examples=25, deadline=None)
@given(amps=st.lists(st.floats(0.1, 10.0), min_size=1, max_size=5))
def test_plane_wave_null_theorem(amps):
    cfg = CavityConfig(L=math.pi, V=1.0, unit_system="NATURAL")
    ms = build_mode_set(cfg, len(amps))
    fc = cu.FieldComponents.plane_wave(ms, amps)
    z, t = np.meshgrid(np.linspace(0, cfg.L, 9), np.linspace(0, 7, 5), indexing="ij")
    cur = cu.noether_currents(fc, 1.0, 1.0, z, t)
    scale = cu.current_scale(cur)
    assert np.max(np.abs(cur.j1)) <= 1e-12 * scale
    assert np.max(np.abs(cur.j2[:3])) <= 1e-12 * scale
    closed = cu.plane_wave_charge(ms, 1.0, 1.0, amps)
    assert np.max(np.abs(cur.j2[3] - closed)) <= 1e-10 * abs(closed)


def test_plane_wave_time_component_with_c():
    # with x4 = i c t the measured component carries no factor c
    cfg = CavityConfig(L=2.0, V=1.0, unit_system="NATURAL")
    cgs = CavityConfig(L=2.0, V=1.0, unit_system="CGS")
    for c in (cfg, cgs):
        ms = build_mode_set(c, 2)
        cur = cu.noether_currents(cu.FieldComponents.plane_wave(ms), c.e, c.hbar, 0.5, 0.1)
        x4 = cu.plane_wave_charge_x4(ms, c.e, c.hbar)
        assert cur.j2[3].real == pytest.approx(x4, rel=1e-12)
        assert cu.plane_wave_charge(ms, c.e, c.hbar) == pytest.approx(x4 * c.c, rel=1e-14)


def test_gauge_group_consistency(natural, three_modes, rng):
    fc = cu.FieldComponents(three_modes, random_real_states(rng, 3))
    z, t = np.linspace(0.1, 3.0, 6), np.linspace(0, 2, 6)
    S, T = cu.conjugate_sums(fc, z, t)
    np.testing.assert_allclose(T, S.conj(), atol=1e-14)
    e, hbar, c = 1.7, 0.9, natural.c
    cur = cu.noether_currents(fc, e, hbar, z, t)
    np.testing.assert_array_equal(cur.j1, -1j * e / (hbar * c) * (S - T))
    np.testing.assert_array_equal(cur.j2, -e / (hbar * c) * (S + T))
    np.testing.assert_array_equal(cur.j_total, cur.j1 + 1j * cur.j2)


def test_lagrangian_derivative_is_conjugate_gradient(natural, three_modes, rng):
    # dL/d(d_mu u) = c^2 (d_mu u)^*: check by complex-step perturbation of one gradient entry
    fc = cu.FieldComponents(three_modes, random_real_states(rng, 3))
    grad = fc.four_gradient(0.8, 0.4)
    c2 = natural.c**2
    kin = lambda g: 0.5 * c2 * np.sum(g * g.conj())
    h = 1e-6
    for idx in [(2, 0, 0), (3, 1, 1), (2, 2, 1)]:
        g = grad.copy()
        g[idx] += h
        d_re = (kin(g) - kin(grad)).real / h
        # Wirtinger: dK/dRe(x) = 2 Re(dK/dx) with dK/dx = c^2 x^* / 2 for K = c^2 |x|^2 / 2
        assert d_re == pytest.approx(c2 * grad[idx].real, abs=1e-5)


def test_continuity_plane_wave(natural):
    for n in (1, 3):
        ms = build_mode_set(natural, n)
        fc = cu.FieldComponents.plane_wave(ms, np.linspace(0.5, 2.0, n))
        assert cu.continuity_residual(fc, 1.0, 1.0, 64, 64) <= 1e-12


def test_continuity_zero_field(three_modes):
    fc = cu.FieldComponents(three_modes, [ClassicalModeState(0, 0)] * 3)
    assert cu.continuity_residual(fc, 1.0, 1.0, 64, 64) == 0.0


def test_continuity_resolution_warning(three_modes):
    fc = cu.FieldComponents.plane_wave(three_modes)
    with pytest.warns(ResolutionWarning):
        cu.continuity_residual(fc, 1.0, 1.0, 8, 8)


def test_continuity_component_selector(three_modes):
    fc = cu.FieldComponents.plane_wave(three_modes)
    with pytest.raises(ValueError):
        cu.continuity_residual(fc, 1.0, 1.0, 64, 64, which="j3")


def test_field_components_validation(three_modes):
    with pytest.raises(ValueError):
        cu.FieldComponents(three_modes, [ClassicalModeState(1, 1)])
    with pytest.raises(ValueError):
        cu.FieldComponents.plane_wave(three_modes, [1.0, 2.0])


def test_current_grid_shape(three_modes):
    fc = cu.FieldComponents.plane_wave(three_modes)
    Z, T, cur = cu.current_grid(fc, 1.0, 1.0, np.linspace(0, 1, 5), np.linspace(0, 1, 3))
    assert Z.shape == (5, 3) and cur.j1.shape == (4, 5, 3)


def test_j2_conserved_for_generic_states(natural, rng):
    from conftest import random_complex_states
    fc = cu.FieldComponents(build_mode_set(natural, 2), random_complex_states(rng, 2))
    assert cu.continuity_residual(fc, 1.0, 1.0, 64, 64, which="j2") <= 1e-12


def test_j1_divergence_matches_closed_form(natural, rng):
    # symbolic substitution gives d_mu j1_mu = (8 i e / hbar c) sum A^2 w^2 Re(C1 C2^* e^{2iwt}),
    # independent of z; central differences converge to it at second order
    from conftest import random_complex_states
    ms = build_mode_set(natural, 2)
    states = random_complex_states(rng, 2)
    fc = cu.FieldComponents(ms, states)
    e, hbar, c = 1.3, 0.8, natural.c
    z, t = np.array([0.4, 1.7, 2.9]), np.array([0.0, 0.6, 2.2])

    def exact(t):
        acc = sum(md.A**2 * md.omega**2 * (s.C1 * np.conj(s.C2) * np.exp(2j * md.omega * t)).real
                  for s, md in zip(states, ms))
        return 8j * e / (hbar * c) * acc

    def fd(h):
        j = lambda zz, tt: cu.noether_currents(fc, e, hbar, zz, tt).j1
        return ((j(z + h, t)[2] - j(z - h, t)[2]) / (2 * h)
                + (j(z, t + h)[3] - j(z, t - h)[3]) / (2 * h) / (1j * c))

    err1 = np.max(np.abs(fd(1e-2) - exact(t)))
    err2 = np.max(np.abs(fd(5e-3) - exact(t)))
    assert np.max(np.abs(exact(t))) > 1.0
    assert err1 / err2 == pytest.approx(4.0, rel=0.05)
