"""Numpy implementations of the grid kernels.

Always importable; used when the compiled module is missing or when
``DUALCAVITY_PURE_PYTHON=1``. Signatures match ``_kernels_c`` exactly.
"""
import numpy as np


def _profile(kz, kind):
    if kind == 0:
        return np.sin(kz)
    if kind == 1:
        return np.cos(kz)
    raise ValueError(f"profile kind must be 0 (sin) or 1 (cos), got {kind}")


def mode_sum(z, k, coeff, kind):
    """out[i, j] = sum_a profile(k[a] * z[i]) * coeff[a, j].

    ``kind`` 0 selects sin, 1 selects cos.
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    k = np.ascontiguousarray(k, dtype=np.float64)
    coeff = np.ascontiguousarray(coeff, dtype=np.complex128)
    return _profile(np.outer(z, k), kind) @ coeff


def maxwell_residual(z, hz, k, e_m, e_0, e_p, h_m, h_0, h_p, ht, eps0, mu0):
    """Central-difference residuals of the two curl equations on a (z, t) grid.

    The electric field is Ex = sum_a sin(k_a z) e_a(t), the magnetic field
    Hy = sum_a cos(k_a z) h_a(t). ``e_m``, ``e_0``, ``e_p`` hold the mode
    coefficients at t - ht, t, t + ht (shape (n_modes, n_t)); likewise for h.

    Returns ``(max|r2|, max|eps0 dE/dt|, max|dH/dz|, max|r4|, max|dE/dz|,
    max|mu0 dH/dt|)`` with r2 = eps0 dE/dt + dH/dz and r4 = dE/dz + mu0 dH/dt.
    """
    z = np.asarray(z, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    kz = np.outer(z, k)
    kzp = np.outer(z + hz, k)
    kzm = np.outer(z - hz, k)
    s0 = np.sin(kz)
    c0 = np.cos(kz)
    ds = (np.sin(kzp) - np.sin(kzm)) / (2.0 * hz)
    dc = (np.cos(kzp) - np.cos(kzm)) / (2.0 * hz)

    de_dt = s0 @ ((np.asarray(e_p) - np.asarray(e_m)) / (2.0 * ht))
    dh_dt = c0 @ ((np.asarray(h_p) - np.asarray(h_m)) / (2.0 * ht))
    de_dz = ds @ np.asarray(e_0)
    dh_dz = dc @ np.asarray(h_0)

    a2 = eps0 * de_dt
    r2 = a2 + dh_dz
    b4 = mu0 * dh_dt
    r4 = de_dz + b4
    return (
        float(np.max(np.abs(r2))),
        float(np.max(np.abs(a2))),
        float(np.max(np.abs(dh_dz))),
        float(np.max(np.abs(r4))),
        float(np.max(np.abs(de_dz))),
        float(np.max(np.abs(b4))),
    )
