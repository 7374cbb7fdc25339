"""Invariant suite run by ``dualcavity verify``.

Each check measures one residual and compares it with a named tolerance.
Diagnostics are measured the same way but never gate the exit code; they
record the places where reference closed forms and the implemented algebra
disagree by a fixed factor.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import classical as cl
from . import currents as cu
from . import charges as ch
from . import fock as fk
from .config import CavityConfig, ModeSet, build_mode_set
from .io import RunConfig, parse_config, DEFAULT_CONFIG

TOLERANCES = {
    "dispersion_ulp": 1.0,
    "mode_ode_residual": 1e-6,
    "antiderivative_identity": 1e-6,
    "maxwell_sol1": 1e-5,
    "maxwell_sol2": 1e-5,
    "maxwell_combined": 1e-5,
    "energy_conservation_sol1": 1e-10,
    "energy_conservation_sol2": 1e-10,
    "energy_form_equivalence_sol1": 1e-8,
    "energy_form_equivalence_sol2": 1e-8,
    "ladder_commutator_interior": 1e-13,
    "ladder_commutator_top": 1e-13,
    "canonical_commutator": 1e-12,
    "oscillator_spectrum": 1e-10,
    "heisenberg_unitarity": 1e-8,
    "coherent_correspondence": 1e-6,
    "plane_wave_j1": 1e-12,
    "plane_wave_j2_spatial": 1e-12,
    "plane_wave_j2_time": 1e-10,
    "current_linearity": 0.0,
    "continuity_plane_wave": 1e-12,
    "magnetic_density_zero": 1e-12,
    "electric_density_fast_path": 1e-12,
    "electric_density_time_independence": 1e-12,
    "charge_quantum_linearity": 4 * np.finfo(float).eps,
    "dirac_bounds": 1e-3,
}


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""


def _rel(a, b):
    scale = max(np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / scale)


def _random_real_states(rng, n):
    return [cl.ClassicalModeState.real(complex(*rng.normal(size=2))) for _ in range(n)]


def run_checks(run: RunConfig, seed: int = 0, tolerances: dict | None = None):
    tol = dict(TOLERANCES)
    for name, value in (tolerances or {}).items():
        if name not in tol:
            raise KeyError(f"unknown tolerance {name!r}")
        tol[name] = float(value)
    rng = np.random.default_rng(seed)
    checks, diagnostics = [], []

    def check(name, measured, detail=""):
        measured = float(measured)
        checks.append(Check(name, measured, tol[name], bool(measured <= tol[name]), detail))

    cfg = run.cavity
    modes = run.modes
    states = run.states

    # dispersion, in units of the last place of omega
    check("dispersion_ulp", max(abs(md.omega - cfg.c * md.k) / np.spacing(md.omega)
                                for md in modes))

    # mode ODE and antiderivative identity by central differences
    ode, anti = 0.0, 0.0
    for s, md in zip(states, modes):
        w = md.omega
        h = 1e-4 / w
        t = np.linspace(0.0, 2 * math.pi / w, 101)
        q = cl.eval_q(s, w, t)
        d2 = (cl.eval_q(s, w, t + h) - 2 * q + cl.eval_q(s, w, t - h)) / h**2
        scale = max(np.max(np.abs(q)), 1e-300) * md.k**2 / (cfg.mu0 * cfg.eps0)
        ode = max(ode, float(np.max(np.abs(d2 + md.k**2 / (cfg.mu0 * cfg.eps0) * q)) / scale))
        dq1 = (cl.eval_q_prime(s, w, t + h) - cl.eval_q_prime(s, w, t - h)) / (2 * h)
        anti = max(anti, _rel(dq1, q))
    check("mode_ode_residual", ode)
    check("antiderivative_identity", anti)

    rand_states = _random_real_states(rng, len(modes))
    for which in ("SOL1", "SOL2", "COMBINED"):
        res = cl.maxwell_residuals(rand_states, modes, which)
        check(f"maxwell_{which.lower()}", max(res.values()),
              f"ampere={res['ampere']:.3e} faraday={res['faraday']:.3e}")

    period = 2 * math.pi / float(np.min(modes.omega))
    ts = np.linspace(0.0, period, 100)
    for which in ("SOL1", "SOL2"):
        hc = cl.hamiltonian_canonical(rand_states, modes, which, ts)
        hi = cl.hamiltonian_integral(rand_states, modes, which, ts[:5], n_quadrature=4096)
        check(f"energy_conservation_{which.lower()}", np.ptp(hc.real) / abs(hc[0]))
        check(f"energy_form_equivalence_{which.lower()}", _rel(hi, hc[:5]))

    # truncated ladder algebra
    space = fk.FockSpace(run.n_levels)
    N = space.n_levels
    a, ad = fk.ladder_pair(space)
    comm = fk.commutator(a, ad).entries
    check("ladder_commutator_interior", np.max(np.abs(comm[:-1, :-1] - np.eye(N - 1))))
    check("ladder_commutator_top", abs(comm[-1, -1] + (N - 1)),
          f"top entry {comm[-1, -1].real:g}")

    md = modes[0]
    q, p = fk.canonical_ops(space, md.m, md.omega, cfg.hbar)
    pq = fk.commutator(p, q).interior() - 1j * cfg.hbar * np.eye(N - 1)
    check("canonical_commutator", np.max(np.abs(pq)) / cfg.hbar)

    ham = fk.hamiltonian_operator(md, space, cfg.hbar)
    expected = cfg.hbar * md.omega * (np.arange(N - 2) + 0.5)
    check("oscillator_spectrum", _rel(fk.spectrum(ham)[: N - 2], expected))

    zs = 0.37 * cfg.L
    tt = 0.81 * period
    e_t = fk.field_operator(md, space, cfg, "E1", zs, tt).interior()
    e_h = fk.heisenberg(fk.field_operator(md, space, cfg, "E1", zs, 0.0), ham, tt, cfg.hbar)
    check("heisenberg_unitarity", _rel(e_h, e_t))

    big = fk.FockSpace(40)
    amp = 2.0 * np.exp(1j * rng.uniform(0, 2 * math.pi))
    coh = fk.coherent_state(big, amp)
    c2 = amp * math.sqrt(cfg.hbar / (2 * md.m * md.omega))
    single = _single(cfg, md)
    zg = np.linspace(0.0, cfg.L, 9)
    tg = np.linspace(0.0, period, 7)
    classical_e = cl.eval_field_grid([cl.ClassicalModeState(np.conj(c2), c2)], single, "SOL1",
                                     zg, tg)[0]
    quantum_e = np.array([[fk.expectation(coh, fk.field_operator(md, big, cfg, "E1", z, t))
                           for t in tg] for z in zg])
    check("coherent_correspondence", _rel(quantum_e, classical_e))

    # plane-wave currents in natural units
    nat = CavityConfig(L=math.pi, V=1.0, unit_system="NATURAL")
    pw_modes = build_mode_set(nat, len(modes))
    amps = rng.uniform(0.5, 2.0, len(modes))
    fc = cu.FieldComponents.plane_wave(pw_modes, amps)
    zz, tt2 = np.meshgrid(np.linspace(0, nat.L, 17), np.linspace(0, 2 * math.pi, 9), indexing="ij")
    cur = cu.noether_currents(fc, nat.e, nat.hbar, zz, tt2)
    scale = cu.current_scale(cur)
    check("plane_wave_j1", np.max(np.abs(cur.j1)) / scale)
    check("plane_wave_j2_spatial", np.max(np.abs(cur.j2[:3])) / scale)
    closed = cu.plane_wave_charge(pw_modes, nat.e, nat.hbar, amps)
    check("plane_wave_j2_time", _rel(cur.j2[3], closed),
          f"measured={cur.j2[3].real.mean():.12g} expected={closed:.12g}")
    check("current_linearity", np.max(np.abs(cur.j_total - (cur.j1 + 1j * cur.j2))))
    n_grid = max(64, 16 * len(modes) + 16)
    check("continuity_plane_wave", cu.continuity_residual(fc, nat.e, nat.hbar, n_grid, n_grid))

    # charge densities on a small two-family space
    cs = fk.FockSpace(min(N, 8))
    k1, k2 = run.K1[0], run.K2[0]
    mag = 0.0
    for n in range(cs.n_levels):
        for z in np.linspace(0, cfg.L, 5):
            mag = max(mag, abs(ch.number_state_expectation(md, cs, k1, k2, cfg, "MAGNETIC",
                                                           float(z), 0.3, n, n)))
    el_scale = abs(ch.number_state_expectation(md, cs, k1, k2, cfg, "ELECTRIC", 0.3 * cfg.L))
    check("magnetic_density_zero", mag / max(el_scale, 1e-300))

    single_cs = _single(cfg, md)
    slow = ch.charge_density_operator(single_cs, cs, k1, k2, cfg, "ELECTRIC", 0.3 * cfg.L, 0.2)
    fast = ch.charge_density_operator(single_cs, cs, k1, k2, cfg, "ELECTRIC", 0.3 * cfg.L, 0.2,
                                      fast=True)
    check("electric_density_fast_path", _rel(fast.entries, slow.entries))

    spread = [ch.number_state_expectation(md, cs, k1, k2, cfg, "ELECTRIC", 0.3 * cfg.L, t, 1, 0)
              for t in np.linspace(0, period, 16)]
    check("electric_density_time_independence", _rel(spread, np.full(16, spread[0])))

    five = build_mode_set(cfg, 5)
    ratios = [ch.charge_quantum(m5, k1, k2, cfg.e, cfg.hbar, cfg)[0] / m5.omega for m5 in five]
    g = ch.charge_quantum(five[0], k1, k2, cfg.e, cfg.hbar, cfg)[1]
    check("charge_quantum_linearity", _rel(ratios, np.full(5, g)))

    d = ch.dirac_ratio_report(run.dirac["J_ratio_low"], run.dirac["J_ratio_high"],
                              int(run.dirac["n"]))
    dirac_err = max(abs(d["g_over_e_low"] - 109.5) / 109.5, abs(d["g_over_e_high"] - 126.5) / 126.5,
                    abs(d["dirac_value"] - 137.0) / 137.0)
    check("dirac_bounds", dirac_err,
          f"g/e in [{d['g_over_e_low']:.4f}, {d['g_over_e_high']:.4f}], dirac={d['dirac_value']:g}")

    # non-gating comparisons against reference closed forms
    measured = ch.number_state_expectation(md, cs, k1, k2, cfg, "ELECTRIC", 0.3 * cfg.L)
    reference = ch.reference_electric_expectation(md, k1, k2, cfg, 0.3 * cfg.L)
    diagnostics.append({"name": "electric_density_over_reference",
                        "value": float((measured / complex(reference)).real),
                        "note": "operator expectation divided by reference closed form"})
    gen_fc = cu.FieldComponents(build_mode_set(nat, 2), _random_real_states(rng, 2))
    coarse = cu.continuity_residual(gen_fc, nat.e, nat.hbar, 64, 64)
    fine = cu.continuity_residual(gen_fc, nat.e, nat.hbar, 128, 128)
    diagnostics.append({"name": "continuity_generic_refinement_ratio",
                        "value": coarse / fine if fine else math.inf,
                        "note": f"residual {coarse:.6g} -> {fine:.6g} on halving the steps"})
    return checks, diagnostics


def _single(cfg, md):
    return ModeSet((md,), cfg)


def report(checks, diagnostics, seed: int) -> dict:
    return {
        "seed": seed,
        "all_passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
        "diagnostics": diagnostics,
    }


def table(checks, diagnostics) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'measured':>12}  {'tolerance':>10}  result"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.measured:12.4e}  {c.tolerance:10.1e}  "
                     f"{'PASS' if c.passed else 'FAIL'}" + (f"  {c.detail}" if c.detail else ""))
    for d in diagnostics:
        lines.append(f"[diagnostic] {d['name']} = {d['value']:.6g}  ({d['note']})")
    return "\n".join(lines) + "\n"


def default_run() -> RunConfig:
    return parse_config(DEFAULT_CONFIG)
