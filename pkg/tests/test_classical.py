import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from dualcavity import classical as cl
from dualcavity.config import CavityConfig, build_mode_set, make_mode, mode_set_from_alphas
from conftest import random_complex_states, random_real_states

S = cl.ClassicalModeState


# amplitude functions ---------------------------------------------------------

def test_eval_q_examples():
    assert cl.eval_q(S(1, 0), 1.0, 0.0) == 1
    assert cl.eval_q(S(0.5, 0.5), 1.0, math.pi) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("omega", [0.3, 1.0, 7.0])
def test_eval_q_solves_oscillator_equation(omega, rng):
    s = S(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
    t = np.linspace(0.0, 3.0, 31)
    h = 1e-4 / omega
    d2 = (cl.eval_q(s, omega, t + h) - 2 * cl.eval_q(s, omega, t) + cl.eval_q(s, omega, t - h)) / h**2
    resid = np.abs(d2 + omega**2 * cl.eval_q(s, omega, t))
    assert resid.max() / (omega**2 * np.abs(cl.eval_q(s, omega, t)).max()) <= 1e-6


def test_eval_q_residual_second_order(rng):
    # step 1e-2 is large enough that truncation error dominates round-off
    s = S(0.7 + 0.2j, -0.1 + 0.4j)
    t = np.linspace(0.0, 2.0, 11)

    def resid(h):
        d2 = (cl.eval_q(s, 1.0, t + h) - 2 * cl.eval_q(s, 1.0, t) + cl.eval_q(s, 1.0, t - h)) / h**2
        return np.abs(d2 + cl.eval_q(s, 1.0, t)).max()

    assert resid(1e-2) / resid(5e-3) == pytest.approx(4.0, rel=1e-2)


def test_eval_q_prime_closed_form():
    assert cl.eval_q_prime(S(1, 0), 1.0, math.pi) == pytest.approx(2j, abs=1e-15)


def test_eval_q_prime_zero_at_origin(rng):
    for s in random_complex_states(rng, 4):
        assert cl.eval_q_prime(s, 2.5, 0.0) == 0


def test_eval_q_prime_matches_quadrature():
    s = S(0.5, 0.5)
    re, _ = quad(lambda x: cl.eval_q(s, 1.0, x).real, 0.0, 1.0, epsabs=0, epsrel=1e-13)
    im, _ = quad(lambda x: cl.eval_q(s, 1.0, x).imag, 0.0, 1.0, epsabs=1e-15)
    exact = complex(re, im)
    assert abs(cl.eval_q_prime(s, 1.0, 1.0) - exact) <= 1e-10 * abs(exact)
    assert exact == pytest.approx(math.sin(1.0), rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(c=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       d=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       omega=st.floats(0.1, 20.0), t=st.floats(-5.0, 5.0))
def test_antiderivative_identity(c, d, omega, t):
    s = S(c, d)
    h = 1e-4 / omega
    fd = (cl.eval_q_prime(s, omega, t + h) - cl.eval_q_prime(s, omega, t - h)) / (2 * h)
    scale = abs(c) + abs(d)
    assert abs(fd - cl.eval_q(s, omega, t)) <= 1e-6 * max(scale, 1e-12)


def test_oscillating_antiderivative_offset(rng):
    s = S(0.3 - 0.2j, 1.1 + 0.5j)
    t = np.linspace(-1, 4, 9)
    np.testing.assert_allclose(cl.eval_q_prime_oscillating(s, 1.7, t),
                               cl.eval_q_prime(s, 1.7, t) + cl.q_prime_offset(s, 1.7), atol=1e-14)


def test_zero_frequency_is_singular(natural):
    with pytest.raises(cl.SingularFrequencyError):
        cl.eval_q_prime(S(1, 0), 0.0, 1.0)
    with pytest.raises(cl.SingularFrequencyError):
        cl.q_prime_offset(S(1, 0), 0.0)
    with pytest.raises(cl.SingularFrequencyError):
        cl.eval_q_prime_oscillating(S(1, 0), 0.0, 1.0)


def test_real_state_constructor():
    s = S.real(0.3 + 0.4j)
    assert s.C2 == 0.3 - 0.4j
    assert s.is_real
    assert not S(1, 1j).is_real


# f_alpha ----------------------------------------------------------------------

def test_f_alpha_examples(natural):
    md = build_mode_set(natural, 1)[0]
    assert cl.eval_f_alpha(S(1, 0), md, 0.0, math.pi, natural) == pytest.approx(
        3 * math.sqrt(2) * 1j, abs=1e-14)
    assert cl.eval_f_alpha(S(0.5, 0.5), md, 0.4, 0.0, natural) == 0
    assert abs(cl.eval_f_alpha(S(1, 0.2), md, natural.L / 2, 1.3, natural)) < 1e-15


def test_sol1_plus_f_gives_literal_second_field(natural, rng):
    # adding sum f_alpha to SOL1 Hy gives (1/mu0) sum k A q' cos kz with q' from 0
    ms = build_mode_set(natural, 3)
    states = random_complex_states(rng, 3)
    z = np.linspace(0, natural.L, 7)
    t = np.linspace(0, 5, 5)
    _, h1 = cl.eval_field_grid(states, ms, "SOL1", z, t)
    f = sum(cl.eval_f_alpha(s, md, z[:, None], t[None, :], natural) for s, md in zip(states, ms))
    literal = sum(md.k * md.A / natural.mu0 * np.cos(md.k * z[:, None])
                  * cl.eval_q_prime(s, md.omega, t[None, :]) for s, md in zip(states, ms))
    np.testing.assert_allclose(h1 + f, literal, atol=1e-13)


# fields -----------------------------------------------------------------------

def test_sol1_node_and_sol2_electric_identity(natural, rng):
    ms = build_mode_set(natural, 3)
    states = random_complex_states(rng, 3)
    z = np.linspace(0, natural.L, 11)
    t = np.linspace(0, 6, 13)
    e1, _ = cl.eval_field_grid(states, ms, "SOL1", z, t)
    e2, _ = cl.eval_field_grid(states, ms, "SOL2", z, t)
    assert np.all(e1[0] == 0)
    np.testing.assert_array_equal(e1, e2)


def test_domain_error(natural, three_modes):
    with pytest.raises(cl.DomainError):
        cl.eval_field([S(1, 1)] * 3, three_modes, "SOL1", natural.L * 1.01, 0.0)
    with pytest.raises(cl.DomainError):
        cl.eval_field([S(1, 1)] * 3, three_modes, "SOL1", -0.1, 0.0)


def test_combined_is_linear_combination(natural, rng, three_modes):
    states = random_complex_states(rng, 3)
    z = np.linspace(0, natural.L, 9)
    t = np.linspace(0, 3, 4)
    e1, h1 = cl.eval_field_grid(states, three_modes, "SOL1", z, t)
    e2, h2 = cl.eval_field_grid(states, three_modes, "SOL2", z, t)
    ec, hc = cl.eval_field_grid(states, three_modes, "COMBINED", z, t)
    np.testing.assert_allclose(ec, e1 + 1j * e2, atol=1e-14)
    np.testing.assert_allclose(hc, h2 + 1j * h1, atol=1e-14)


def test_field_sample(natural, three_modes):
    fs = cl.eval_field([S(0.5, 0.5)] * 3, three_modes, "SOL1", 0.0, 0.2)
    assert fs.Ex == 0 and fs.which is cl.Solution.SOL1


@pytest.mark.parametrize("which", ["SOL1", "SOL2", "COMBINED"])
def test_maxwell_residuals_small_grid(natural, rng, which):
    ms = build_mode_set(natural, 3)
    res = cl.maxwell_residuals(random_real_states(rng, 3), ms, which, nz=200, nt=100)
    assert res["ampere"] <= 1e-5 and res["faraday"] <= 1e-5


def test_maxwell_residual_detects_wrong_sign(natural, rng):
    # the second solution with the opposite magnetic sign must fail the curl equations
    ms = build_mode_set(natural, 2)
    states = random_real_states(rng, 2)
    z = np.linspace(0, natural.L, 50)[1:-1]
    dz = natural.L / 2000
    dt = 1e-4 / 2
    t = np.linspace(0, 6, 40)
    coeffs = [cl.field_coefficients(states, ms, "SOL2", t + s) for s in (-dt, 0.0, dt)]
    from dualcavity import kernels
    good = kernels.maxwell_residual(z, dz, ms.k, *(c[0] for c in coeffs), *(c[1] for c in coeffs),
                                    dt, 1.0, 1.0)
    bad = kernels.maxwell_residual(z, dz, ms.k, *(c[0] for c in coeffs), *(-c[1] for c in coeffs),
                                   dt, 1.0, 1.0)
    assert good[0] / (good[1] + good[2]) < 1e-5
    assert bad[0] / (bad[1] + bad[2]) > 0.5


def test_literal_second_field_fails_curl_for_generic_state(natural):
    # with q' taken from 0 the static H offset breaks the Ampere balance only
    from dualcavity import kernels
    ms = build_mode_set(natural, 1)
    md = ms[0]
    s = S(1.0, 0.0)
    z = np.linspace(0, natural.L, 50)[1:-1]
    dt = 1e-4
    t = np.linspace(0, 6, 40)
    e = [md.A * cl.eval_q(s, md.omega, t + d)[None] for d in (-dt, 0.0, dt)]
    h = [-(md.k * md.A) * cl.eval_q_prime(s, md.omega, t + d)[None] for d in (-dt, 0.0, dt)]
    r = kernels.maxwell_residual(z, natural.L / 2000, ms.k, *e, *h, dt, 1.0, 1.0)
    assert r[0] / (r[1] + r[2]) > 0.1
    assert r[3] / (r[4] + r[5]) < 1e-5


def test_parity_about_node(natural):
    # alpha = 2 has a sine node at L/2: Ex odd, Hy even about it, for both solutions
    ms = mode_set_from_alphas(natural, [2])
    s = [S(0.4 + 0.1j, 0.4 - 0.1j)]
    d = np.linspace(0.05, 1.0, 9)
    t = np.linspace(0, 3, 5)
    for which in ("SOL1", "SOL2"):
        ep, hp = cl.eval_field_grid(s, ms, which, natural.L / 2 + d, t)
        em, hm = cl.eval_field_grid(s, ms, which, natural.L / 2 - d, t)
        np.testing.assert_allclose(ep, -em, atol=1e-14)
        np.testing.assert_allclose(hp, hm, atol=1e-14)


def test_role_swap_between_solutions(natural, rng):
    # SOL1: E carries the coordinate q, H the momentum; SOL2: H carries q'', E the momentum p''
    ms = build_mode_set(natural, 1)
    md = ms[0]
    s = random_real_states(rng, 1)
    t = np.linspace(0, 4, 9)
    e1, h1 = cl.field_coefficients(s, ms, "SOL1", t)
    e2, h2 = cl.field_coefficients(s, ms, "SOL2", t)
    q, p = cl.canonical_pair(s[0], md, "SOL1", t)
    q2, p2 = cl.canonical_pair(s[0], md, "SOL2", t)
    np.testing.assert_allclose(e1[0], md.A * q, atol=1e-14)
    np.testing.assert_allclose(h1[0], md.A / md.k / md.m * p, atol=1e-14)
    np.testing.assert_allclose(h2[0], -md.k * md.A / md.nu * q2, atol=1e-14)
    np.testing.assert_allclose(e2[0], md.A / (md.m * md.nu) * p2, atol=1e-14)


def test_combined_has_four_independent_components(natural, rng):
    ms = build_mode_set(natural, 3)
    states = random_complex_states(rng, 3)
    z = np.linspace(0, natural.L, 17)
    t = np.linspace(0, 2 * math.pi, 13)
    ec, hc = cl.eval_field_grid(states, ms, "COMBINED", z, t)
    comps = np.stack([ec.real.ravel(), ec.imag.ravel(), hc.real.ravel(), hc.imag.ravel()])
    comps /= np.linalg.norm(comps, axis=1, keepdims=True)
    gram = comps @ comps.T
    assert np.linalg.cond(gram) < 1e6


def test_field_units_required_outside_cgs():
    cgs = CavityConfig(L=1, V=1, unit_system="CGS")
    with pytest.raises(Exception):
        cl.eval_field_grid([S(1, 1)], build_mode_set(cgs, 1), "SOL1", [0.1], [0.0])


# energies ---------------------------------------------------------------------

def test_single_mode_energy_half(natural):
    ms = build_mode_set(natural, 1)
    t = np.linspace(0, 2 * math.pi, 100)
    for which in ("SOL1", "SOL2"):
        h = cl.hamiltonian_canonical([S(0.5, 0.5)], ms, which, t)
        np.testing.assert_allclose(h, 0.5, atol=1e-15)


def test_sol2_canonical_pair_values(natural):
    md = build_mode_set(natural, 1)[0]
    t = np.linspace(0, 3, 7)
    q2, p2 = cl.canonical_pair(S(0.5, 0.5), md, "SOL2", t)
    np.testing.assert_allclose(q2, np.sin(t), atol=1e-15)
    np.testing.assert_allclose(p2, np.cos(t), atol=1e-15)


def test_vacuum_energy_zero(three_modes):
    assert cl.hamiltonian_canonical([cl.VACUUM] * 3, three_modes, "SOL1", 0.3) == 0
    assert cl.hamiltonian_integral([cl.VACUUM] * 3, three_modes, "SOL2", 0.3, 64) == 0


@pytest.mark.parametrize("which", ["SOL1", "SOL2"])
def test_energy_forms_agree(natural, rng, which):
    ms = build_mode_set(natural, 3)
    states = random_real_states(rng, 3)
    t = np.linspace(0, 2 * math.pi, 100)
    hc = cl.hamiltonian_canonical(states, ms, which, t)
    hi = cl.hamiltonian_integral(states, ms, which, t, 4096)
    assert np.max(np.abs(hc - hi)) / abs(hc[0]) <= 1e-8
    assert np.max(np.abs(hc.imag)) <= 1e-12 * abs(hc[0])
    assert np.ptp(hc.real) / abs(hc[0]) <= 1e-10


def test_energy_forms_agree_si(si, rng):
    ms = build_mode_set(si, 3)
    states = random_real_states(rng, 3)
    t = np.linspace(0, 1e-9, 5)
    hc = cl.hamiltonian_canonical(states, ms, "SOL1", t)
    hi = cl.hamiltonian_integral(states, ms, "SOL1", t, 4096)
    assert np.max(np.abs(hc - hi)) / abs(hc[0]) <= 1e-8


def test_quadrature_resolution_warning(natural, three_modes):
    with pytest.warns(cl.ResolutionWarning):
        cl.hamiltonian_integral([S(0.5, 0.5)] * 3, three_modes, "SOL1", 0.0, 16)


def test_quadrature_converges(natural):
    ms = build_mode_set(natural, 1)
    s = [S(0.5 + 0.2j, 0.5 - 0.2j)]
    exact = cl.hamiltonian_canonical(s, ms, "SOL1", 0.7).real
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cl.ResolutionWarning)
        err2 = abs(cl.hamiltonian_integral(s, ms, "SOL1", 0.7, 2) - exact)
        err4 = abs(cl.hamiltonian_integral(s, ms, "SOL1", 0.7, 4) - exact)
    assert err2 > 0
    assert err2 / max(err4, 1e-300) >= 4
