"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--nz 2000] [--nt 1000] [--modes 3] [--repeat 5]

Reports the best-of-``repeat`` wall time for each kernel and backend and checks
that both backends return the same numbers.
"""
import argparse
import math
import timeit

import numpy as np

from dualcavity import kernels
from dualcavity.classical import ClassicalModeState, field_coefficients
from dualcavity.config import CavityConfig, build_mode_set


def _inputs(nz, nt, n_modes, seed=0):
    cfg = CavityConfig(L=math.pi, V=1.0, unit_system="NATURAL")
    ms = build_mode_set(cfg, n_modes)
    rng = np.random.default_rng(seed)
    states = [ClassicalModeState.real(complex(*rng.normal(size=2))) for _ in range(n_modes)]
    dt = 1e-4 / float(np.max(ms.omega))
    t = np.linspace(0.0, 2 * math.pi, nt, endpoint=False)
    z = np.linspace(0.0, cfg.L, nz + 2)[1:-1]
    coeffs = [field_coefficients(states, ms, "SOL1", t + s) for s in (-dt, 0.0, dt)]
    e = [c[0] for c in coeffs]
    h = [c[1] for c in coeffs]
    return z, ms.k, e, h, cfg.L / 2000, dt


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nz", type=int, default=2000)
    p.add_argument("--nt", type=int, default=1000)
    p.add_argument("--modes", type=int, default=3)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    z, k, e, h, hz, ht = _inputs(args.nz, args.nt, args.modes)
    backends = {"python": kernels.python_impl}
    compiled = kernels.compiled_impl()
    if compiled is not None:
        backends["compiled"] = compiled
    else:
        print("compiled backend not built; timing the numpy backend only")

    jobs = {
        "mode_sum": lambda m: m.mode_sum(z, k, e[1], 0),
        "maxwell_residual": lambda m: m.maxwell_residual(z, hz, k, *e, *h, ht, 1.0, 1.0),
    }
    print(f"grid {args.nz} x {args.nt}, {args.modes} modes, best of {args.repeat}")
    print(f"{'kernel':<18}{'backend':<10}{'seconds':>10}{'speedup':>9}")
    for name, job in jobs.items():
        times = {}
        results = {}
        for label, mod in backends.items():
            results[label] = job(mod)
            times[label] = min(timeit.repeat(lambda: job(mod), number=1, repeat=args.repeat))
        for label, sec in times.items():
            print(f"{name:<18}{label:<10}{sec:>10.4f}{times['python'] / sec:>8.2f}x")
        if len(results) == 2:
            a, b = (np.asarray(r) for r in results.values())
            dev = float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
            print(f"{'':<18}{'max rel diff':<10}{dev:>10.1e}")


if __name__ == "__main__":
    main()
