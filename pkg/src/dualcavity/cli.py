"""Command-line front end.

    dualcavity <command> --config <path> --out <dir> [--seed K] [--tol name=value]

Exit codes: 0 success, 1 failed verification check, 2 configuration error,
3 request outside the supported envelope.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import charges as ch
from . import classical as cl
from . import currents as cu
from . import fock as fk
from . import verify as vf
from .config import CapabilityError, ConfigError
from .io import DEFAULT_CONFIG, RunConfig, load_config, parse_config, write_csv, write_json

COMMANDS = ("classical-evolve", "quantize", "currents", "charge-report", "verify")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_CAPABILITY = 0, 1, 2, 3


def _grid(run: RunConfig):
    cfg = run.cavity
    t_max = run.grid["t_max"]
    if t_max is None:
        t_max = 2 * math.pi / float(np.min(run.modes.omega))
    z = np.linspace(0.0, cfg.L, run.grid["nz"])
    t = np.linspace(0.0, t_max, run.grid["nt"])
    return z, t


def run_classical_evolve(run: RunConfig, out: Path):
    z, t = _grid(run)
    rows = []
    for which in ("SOL1", "SOL2", "COMBINED"):
        Ex, Hy = cl.eval_field_grid(run.states, run.modes, which, z, t)
        for i, zi in enumerate(z):
            for j, tj in enumerate(t):
                rows.append((zi, tj, which, Ex[i, j].real, Ex[i, j].imag,
                             Hy[i, j].real, Hy[i, j].imag))
    write_csv(out / "fields.csv", ["z", "t", "which", "Ex_re", "Ex_im", "Hy_re", "Hy_im"], rows)

    rows = []
    n_q = max(4096, 8 * max(md.alpha for md in run.modes))
    for which in ("SOL1", "SOL2"):
        hc = np.atleast_1d(cl.hamiltonian_canonical(run.states, run.modes, which, t))
        hi = np.atleast_1d(cl.hamiltonian_integral(run.states, run.modes, which, t, n_q))
        for tj, a, b in zip(t, hc, hi):
            rows.append((tj, which, a.real, a.imag, b.real, b.imag))
    write_csv(out / "energy.csv",
              ["t", "which", "H_canonical_re", "H_canonical_im", "H_integral_re", "H_integral_im"],
              rows)


def run_quantize(run: RunConfig, out: Path):
    space = fk.FockSpace(run.n_levels)
    cfg = run.cavity
    a, ad = fk.ladder_pair(space)
    write_json(out / "ladder_a.json", a.to_json())
    write_json(out / "ladder_a_dagger.json", ad.to_json())
    comm = fk.commutator(a, ad).entries
    write_json(out / "commutator_defect.json", {
        "n_levels": space.n_levels,
        "interior_max_deviation": float(np.max(np.abs(comm[:-1, :-1] - np.eye(space.n_levels - 1)))),
        "top_level_value": float(comm[-1, -1].real),
        "expected_top_level_value": -(space.n_levels - 1),
    })
    z_probe = 0.5 * cfg.L
    for md in run.modes:
        tag = f"mode{md.alpha}"
        for family in fk.Family:
            q, p = fk.canonical_ops(space, md.m, md.omega, cfg.hbar, family)
            write_json(out / f"{tag}_{family.value.lower()}_q.json", q.to_json())
            write_json(out / f"{tag}_{family.value.lower()}_p.json", p.to_json())
        for kind in ("E1", "H1", "E2", "H2"):
            op = fk.field_operator(md, space, cfg, kind, z_probe, 0.0)
            write_json(out / f"{tag}_field_{kind}.json", op.to_json())
        ham = fk.hamiltonian_operator(md, space, cfg.hbar)
        write_csv(out / f"{tag}_spectrum.csv", ["eigenvalue"],
                  [(v,) for v in fk.spectrum(ham)])


def run_currents(run: RunConfig, out: Path):
    cfg, factors = ch.to_cgs(run.cavity)
    modes = ch._cgs_modes(run.modes, cfg)
    z, t = _grid(run)
    z = z * factors.get("L", 1.0)
    fc = cu.FieldComponents(modes, run.states)
    _, _, cur = cu.current_grid(fc, cfg.e, cfg.hbar, z, t)
    header = ["z", "t"]
    for name in ("j1", "j2"):
        for mu in range(1, 5):
            header += [f"{name}_{mu}_re", f"{name}_{mu}_im"]
    rows = []
    for i, zi in enumerate(z):
        for j, tj in enumerate(t):
            row = [zi, tj]
            for arr in (cur.j1, cur.j2):
                for mu in range(4):
                    row += [arr[mu, i, j].real, arr[mu, i, j].imag]
            rows.append(row)
    write_csv(out / "currents.csv", header, rows)

    pw = cu.FieldComponents.plane_wave(modes)
    zz, tt = np.meshgrid(z, t, indexing="ij")
    pw_cur = cu.noether_currents(pw, cfg.e, cfg.hbar, zz, tt)
    n_grid = max(64, 16 * max(md.alpha for md in modes) + 16)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cl.ResolutionWarning)
        generic = cu.continuity_residual(fc, cfg.e, cfg.hbar, n_grid, n_grid)
    write_json(out / "continuity.json", {
        "unit_system": cfg.unit_system.value,
        "conversion_factors": factors,
        "plane_wave": {
            "j1_max_abs": float(np.max(np.abs(pw_cur.j1))),
            "j2_spatial_max_abs": float(np.max(np.abs(pw_cur.j2[:3]))),
            "j2_4_measured": float(np.mean(pw_cur.j2[3].real)),
            "j2_4_closed_form_x4_ict": cu.plane_wave_charge_x4(modes, cfg.e, cfg.hbar),
            "j2_4_closed_form_with_c": cu.plane_wave_charge(modes, cfg.e, cfg.hbar),
            "continuity_residual": cu.continuity_residual(pw, cfg.e, cfg.hbar, n_grid, n_grid),
        },
        "configured_state_continuity_residual": generic,
    })


def run_charge_report(run: RunConfig, out: Path):
    space = fk.FockSpace(min(run.n_levels, 8))
    rep = ch.charge_report(run.modes, space, run.K1, run.K2,
                           J_ratio=(run.dirac["J_ratio_low"], run.dirac["J_ratio_high"]),
                           n_dirac=int(run.dirac["n"]))
    write_json(out / "charge_report.json", rep)


def run_verify(run: RunConfig, out: Path, seed: int, tolerances: dict) -> int:
    checks, diagnostics = vf.run_checks(run, seed=seed, tolerances=tolerances)
    write_json(out / "verify_report.json", vf.report(checks, diagnostics, seed))
    text = vf.table(checks, diagnostics)
    (out / "verify_report.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def _parse_tol(items):
    tol = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError("--tol", f"expected name=value, got {item!r}")
        if name not in vf.TOLERANCES:
            raise ConfigError("--tol", f"unknown check {name!r}")
        try:
            tol[name] = float(value)
        except ValueError:
            raise ConfigError("--tol", f"not a number: {value!r}")
    return tol


def build_parser():
    p = argparse.ArgumentParser(prog="dualcavity", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON cavity configuration (verify uses a built-in default)")
    p.add_argument("--out", required=True, help="output directory (created if absent)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized trials")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="override a verification tolerance; repeatable")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        tolerances = _parse_tol(args.tol)
        if args.config is None:
            if args.command != "verify":
                raise ConfigError("--config", f"required for {args.command}")
            run = parse_config(DEFAULT_CONFIG)
            config_doc = DEFAULT_CONFIG
        else:
            run = load_config(args.config)
            config_doc = run.raw
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "manifest.json", {
            "command": args.command,
            "config_path": args.config,
            "config": config_doc,
            "output_dir": str(args.out),
            "seed": args.seed,
            "tolerances": tolerances,
        })
        if args.command == "classical-evolve":
            run_classical_evolve(run, out)
        elif args.command == "quantize":
            run_quantize(run, out)
        elif args.command == "currents":
            run_currents(run, out)
        elif args.command == "charge-report":
            run_charge_report(run, out)
        else:
            return run_verify(run, out, args.seed, tolerances)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapabilityError, fk.TruncationError) as exc:
        print(f"unsupported request: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
