# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``.

Signatures and return conventions match the pure-Python module exactly.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, log2, sqrt, pow, fabs

cnp.import_array()

cdef int VON_NEUMANN = 0
cdef int LINEAR = 1
cdef int TSALLIS = 2
cdef double LN2 = 0.6931471805599453
cdef double P_FLOOR = 1e-300
cdef double P_ROUNDOFF = 1e-14


cdef inline double _clip01(double p) nogil:
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


cdef inline double _f(double p, int kind, double q, double tnorm) nogil:
    p = _clip01(p)
    if p < P_ROUNDOFF:
        return 0.0
    if kind == VON_NEUMANN:
        return -p * log2(p)
    if kind == LINEAR:
        return 2.0 * p * (1.0 - p)
    return (p - pow(p, q)) / tnorm


cdef inline double _fp(double p, int kind, double q, double tnorm) nogil:
    p = _clip01(p)
    if kind == VON_NEUMANN:
        if p < P_FLOOR:
            p = P_FLOOR
        return -(log(p) + 1.0) / LN2
    if kind == LINEAR:
        return 2.0 - 4.0 * p
    if p < P_FLOOR:
        p = P_FLOOR
    return (1.0 - q * pow(p, q - 1.0)) / tnorm


cdef inline double _norm_pm(double[:] ra, double jk0, double jk1, double jk2,
                            double sgn) nogil:
    cdef double a = ra[0] + sgn * jk0
    cdef double b = ra[1] + sgn * jk1
    cdef double c = ra[2] + sgn * jk2
    return sqrt(a * a + b * b + c * c)


def spectra(r_a, r_b, corr, dirs):
    cdef double[:] ra = np.ascontiguousarray(r_a, dtype=float)
    cdef double[:] rb = np.ascontiguousarray(r_b, dtype=float)
    cdef double[:, :] jm = np.ascontiguousarray(corr, dtype=float)
    cdef double[:, :] kk = np.ascontiguousarray(np.atleast_2d(dirs), dtype=float)
    cdef Py_ssize_t m = kk.shape[0], i
    out_arr = np.empty((m, 4))
    cdef double[:, :] out = out_arr
    cdef double rbk, jk0, jk1, jk2, lp, lm
    with nogil:
        for i in range(m):
            rbk = rb[0] * kk[i, 0] + rb[1] * kk[i, 1] + rb[2] * kk[i, 2]
            jk0 = jm[0, 0] * kk[i, 0] + jm[0, 1] * kk[i, 1] + jm[0, 2] * kk[i, 2]
            jk1 = jm[1, 0] * kk[i, 0] + jm[1, 1] * kk[i, 1] + jm[1, 2] * kk[i, 2]
            jk2 = jm[2, 0] * kk[i, 0] + jm[2, 1] * kk[i, 1] + jm[2, 2] * kk[i, 2]
            lp = _norm_pm(ra, jk0, jk1, jk2, 1.0)
            lm = _norm_pm(ra, jk0, jk1, jk2, -1.0)
            out[i, 0] = 0.25 * (1.0 + rbk + lp)
            out[i, 1] = 0.25 * (1.0 + rbk - lp)
            out[i, 2] = 0.25 * (1.0 - rbk + lm)
            out[i, 3] = 0.25 * (1.0 - rbk - lm)
    return out_arr


def objective_values(r_a, r_b, corr, dirs, int kind, double q, bint local):
    cdef double[:] ra = np.ascontiguousarray(r_a, dtype=float)
    cdef double[:] rb = np.ascontiguousarray(r_b, dtype=float)
    cdef double[:, :] jm = np.ascontiguousarray(corr, dtype=float)
    cdef double[:, :] kk = np.ascontiguousarray(np.atleast_2d(dirs), dtype=float)
    cdef Py_ssize_t m = kk.shape[0], i
    out_arr = np.empty(m)
    cdef double[:] out = out_arr
    cdef double rbk, jk0, jk1, jk2, lp, lm, v
    cdef double tnorm = 1.0
    if kind == TSALLIS:
        tnorm = 1.0 - pow(2.0, 1.0 - q)
    with nogil:
        for i in range(m):
            rbk = rb[0] * kk[i, 0] + rb[1] * kk[i, 1] + rb[2] * kk[i, 2]
            jk0 = jm[0, 0] * kk[i, 0] + jm[0, 1] * kk[i, 1] + jm[0, 2] * kk[i, 2]
            jk1 = jm[1, 0] * kk[i, 0] + jm[1, 1] * kk[i, 1] + jm[1, 2] * kk[i, 2]
            jk2 = jm[2, 0] * kk[i, 0] + jm[2, 1] * kk[i, 1] + jm[2, 2] * kk[i, 2]
            lp = _norm_pm(ra, jk0, jk1, jk2, 1.0)
            lm = _norm_pm(ra, jk0, jk1, jk2, -1.0)
            v = (_f(0.25 * (1.0 + rbk + lp), kind, q, tnorm)
                 + _f(0.25 * (1.0 + rbk - lp), kind, q, tnorm)
                 + _f(0.25 * (1.0 - rbk + lm), kind, q, tnorm)
                 + _f(0.25 * (1.0 - rbk - lm), kind, q, tnorm))
            if local:
                v -= (_f(0.5 * (1.0 + rbk), kind, q, tnorm)
                      + _f(0.5 * (1.0 - rbk), kind, q, tnorm))
            out[i] = v
    return out_arr


def objective_gradient(r_a, r_b, corr, k, int kind, double q, bint local):
    ra_np = np.ascontiguousarray(r_a, dtype=float)
    rb_np = np.ascontiguousarray(r_b, dtype=float)
    j_np = np.ascontiguousarray(corr, dtype=float)
    k_np = np.ascontiguousarray(k, dtype=float)
    cdef double[:] ra = ra_np
    cdef double[:] rb = rb_np
    cdef double[:, :] jm = j_np
    cdef double[:] kv = k_np
    cdef double tnorm = 1.0
    if kind == TSALLIS:
        tnorm = 1.0 - pow(2.0, 1.0 - q)
    cdef double rbk = rb[0] * kv[0] + rb[1] * kv[1] + rb[2] * kv[2]
    cdef double jk0 = jm[0, 0] * kv[0] + jm[0, 1] * kv[1] + jm[0, 2] * kv[2]
    cdef double jk1 = jm[1, 0] * kv[0] + jm[1, 1] * kv[1] + jm[1, 2] * kv[2]
    cdef double jk2 = jm[2, 0] * kv[0] + jm[2, 1] * kv[1] + jm[2, 2] * kv[2]
    cdef double a1 = 0.0, a2 = 0.0, a3 = 0.0, value = 0.0
    cdef double nu, nup, lam, p, fp, pb, eta
    cdef int s, t
    for s in range(2):
        nu = 1.0 if s == 0 else -1.0
        lam = _norm_pm(ra, jk0, jk1, jk2, nu)
        for t in range(2):
            nup = 1.0 if t == 0 else -1.0
            p = 0.25 * (1.0 + nu * rbk + nup * lam)
            value += _f(p, kind, q, tnorm)
            fp = _fp(p, kind, q, tnorm)
            a1 += 0.25 * fp * nu
            if lam > 0.0:
                a2 += 0.25 * fp * nu * nup / lam
                a3 += 0.25 * fp * nup / lam
    if local:
        eta = 0.0
        for s in range(2):
            nu = 1.0 if s == 0 else -1.0
            pb = 0.5 * (1.0 + nu * rbk)
            value -= _f(pb, kind, q, tnorm)
            eta += 0.5 * nu * _fp(pb, kind, q, tnorm)
        a1 -= eta
    jk_np = j_np @ k_np
    grad = a1 * rb_np + a2 * (j_np.T @ ra_np) + a3 * (j_np.T @ jk_np)
    return value, grad, (a1, a2, a3)


def pfaffian(a):
    arr = np.array(a, dtype=float, order="C")
    cdef double[:, :] m = arr
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t k, kp, i, j
    cdef double pf = 1.0, best, tmp, piv
    if n % 2:
        return 0.0
    cdef double[:] tau = np.empty(n)
    cdef double[:] col = np.empty(n)
    with nogil:
        for k in range(0, n - 1, 2):
            kp = k + 1
            best = fabs(m[k + 1, k])
            for i in range(k + 2, n):
                if fabs(m[i, k]) > best:
                    best = fabs(m[i, k])
                    kp = i
            if kp != k + 1:
                for j in range(n):
                    tmp = m[k + 1, j]
                    m[k + 1, j] = m[kp, j]
                    m[kp, j] = tmp
                for i in range(n):
                    tmp = m[i, k + 1]
                    m[i, k + 1] = m[i, kp]
                    m[i, kp] = tmp
                pf = -pf
            piv = m[k + 1, k]
            if piv == 0.0:
                pf = 0.0
                break
            pf *= m[k, k + 1]
            if k + 2 < n:
                for i in range(k + 2, n):
                    tau[i] = m[k, i] / m[k, k + 1]
                    col[i] = m[i, k + 1]
                for i in range(k + 2, n):
                    for j in range(k + 2, n):
                        m[i, j] += tau[i] * col[j] - col[i] * tau[j]
    return pf
