# cython: language_level=3
"""Compiled grid kernels: fused mode sums and curl-equation residuals."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt

cnp.import_array()


def mode_sum(z, k, coeff, int kind):
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef double[::1] kv = np.ascontiguousarray(k, dtype=np.float64)
    cdef double complex[:, ::1] cv = np.ascontiguousarray(coeff, dtype=np.complex128)
    if kind != 0 and kind != 1:
        raise ValueError(f"profile kind must be 0 (sin) or 1 (cos), got {kind}")
    cdef Py_ssize_t nz = zv.shape[0], nm = kv.shape[0], nt = cv.shape[1]
    if cv.shape[0] != nm:
        raise ValueError("coeff rows must match the number of wavenumbers")
    # interleaved (re, im) views keep the inner loop in plain double arithmetic
    cdef double[:, ::1] cr = np.ascontiguousarray(np.asarray(cv).view(np.float64))
    out = np.zeros((nz, nt), dtype=np.complex128)
    cdef double[:, ::1] ov = out.view(np.float64)
    cdef double[::1] prof = np.empty(nm, dtype=np.float64)
    cdef Py_ssize_t i, j, a
    cdef double p
    for i in range(nz):
        for a in range(nm):
            prof[a] = sin(kv[a] * zv[i]) if kind == 0 else cos(kv[a] * zv[i])
        for a in range(nm):
            p = prof[a]
            for j in range(2 * nt):
                ov[i, j] += p * cr[a, j]
    return out


cdef inline double cabs2(double complex x) nogil:
    return x.real * x.real + x.imag * x.imag


def maxwell_residual(z, double hz, k, e_m, e_0, e_p, h_m, h_0, h_p,
                     double ht, double eps0, double mu0):
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef double[::1] kv = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t nz = zv.shape[0], nm = kv.shape[0]
    # time-difference coefficients precomputed once per mode and time
    cdef double complex[:, ::1] edt = np.ascontiguousarray(
        (np.asarray(e_p) - np.asarray(e_m)) / (2.0 * ht), dtype=np.complex128)
    cdef double complex[:, ::1] hdt = np.ascontiguousarray(
        (np.asarray(h_p) - np.asarray(h_m)) / (2.0 * ht), dtype=np.complex128)
    cdef double complex[:, ::1] e0 = np.ascontiguousarray(e_0, dtype=np.complex128)
    cdef double complex[:, ::1] h0 = np.ascontiguousarray(h_0, dtype=np.complex128)
    cdef Py_ssize_t nt = e0.shape[1]
    cdef double[::1] s0 = np.empty(nm), c0 = np.empty(nm)
    cdef double[::1] ds = np.empty(nm), dc = np.empty(nm)
    cdef Py_ssize_t i, j, a
    cdef double complex de_dt, dh_dt, de_dz, dh_dz
    cdef double m_r2 = 0, m_a2 = 0, m_b2 = 0, m_r4 = 0, m_a4 = 0, m_b4 = 0
    cdef double inv2h = 1.0 / (2.0 * hz)
    for i in range(nz):
        for a in range(nm):
            s0[a] = sin(kv[a] * zv[i])
            c0[a] = cos(kv[a] * zv[i])
            ds[a] = (sin(kv[a] * (zv[i] + hz)) - sin(kv[a] * (zv[i] - hz))) * inv2h
            dc[a] = (cos(kv[a] * (zv[i] + hz)) - cos(kv[a] * (zv[i] - hz))) * inv2h
        for j in range(nt):
            de_dt = 0
            dh_dt = 0
            de_dz = 0
            dh_dz = 0
            for a in range(nm):
                de_dt = de_dt + s0[a] * edt[a, j]
                dh_dt = dh_dt + c0[a] * hdt[a, j]
                de_dz = de_dz + ds[a] * e0[a, j]
                dh_dz = dh_dz + dc[a] * h0[a, j]
            de_dt = eps0 * de_dt
            dh_dt = mu0 * dh_dt
            m_r2 = max(m_r2, cabs2(de_dt + dh_dz))
            m_a2 = max(m_a2, cabs2(de_dt))
            m_b2 = max(m_b2, cabs2(dh_dz))
            m_r4 = max(m_r4, cabs2(de_dz + dh_dt))
            m_a4 = max(m_a4, cabs2(de_dz))
            m_b4 = max(m_b4, cabs2(dh_dt))
    return (sqrt(m_r2), sqrt(m_a2), sqrt(m_b2), sqrt(m_r4), sqrt(m_a4), sqrt(m_b4))
