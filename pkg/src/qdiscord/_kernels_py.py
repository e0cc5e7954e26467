"""Pure numpy implementations of the hot kernels.

These are the reference versions; the compiled module ``_ckernels`` mirrors
every function here with the same signature and is checked against it in
the test suite.
"""

import numpy as np

VON_NEUMANN = 0
LINEAR = 1
TSALLIS = 2

_LN2 = np.log(2.0)
# floor applied to probabilities inside derivative logs
_P_FLOOR = 1e-300
# probabilities below this are roundoff; p**q with q < 1 would amplify them
P_ROUNDOFF = 1e-14


def f_array(p, kind, q):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    p = np.where(p < P_ROUNDOFF, 0.0, p)
    if kind == VON_NEUMANN:
        out = np.zeros_like(p)
        nz = p > 0
        out[nz] = -p[nz] * np.log2(p[nz])
        return out
    if kind == LINEAR:
        return 2.0 * p * (1.0 - p)
    return (p - p**q) / (1.0 - 2.0 ** (1.0 - q))


def fprime_array(p, kind, q):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    if kind == VON_NEUMANN:
        return -(np.log(np.maximum(p, _P_FLOOR)) + 1.0) / _LN2
    if kind == LINEAR:
        return 2.0 - 4.0 * p
    return (1.0 - q * np.maximum(p, _P_FLOOR) ** (q - 1.0)) / (1.0 - 2.0 ** (1.0 - q))


def spectra(r_a, r_b, corr, dirs):
    """Eigenvalues p[nu, nu'] of the post-measurement state, one row per direction.

    Columns are ordered (nu, nu') = (+,+), (+,-), (-,+), (-,-).
    """
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    rbk = dirs @ r_b
    jk = dirs @ corr.T
    lam_p = np.linalg.norm(r_a[None, :] + jk, axis=1)
    lam_m = np.linalg.norm(r_a[None, :] - jk, axis=1)
    out = np.empty((dirs.shape[0], 4))
    out[:, 0] = 0.25 * (1.0 + rbk + lam_p)
    out[:, 1] = 0.25 * (1.0 + rbk - lam_p)
    out[:, 2] = 0.25 * (1.0 - rbk + lam_m)
    out[:, 3] = 0.25 * (1.0 - rbk - lam_m)
    return out


def objective_values(r_a, r_b, corr, dirs, kind, q, local):
    """S_f of the post-measurement state, minus S_f of the measured marginal if ``local``."""
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    p = spectra(r_a, r_b, corr, dirs)
    val = f_array(p, kind, q).sum(axis=1)
    if local:
        rbk = dirs @ r_b
        pb = np.stack([0.5 * (1.0 + rbk), 0.5 * (1.0 - rbk)], axis=1)
        val = val - f_array(pb, kind, q).sum(axis=1)
    return val


def objective_gradient(r_a, r_b, corr, k, kind, q, local):
    """Value and ambient gradient (w.r.t. the 3-vector k) of the objective.

    The gradient has the form a1 r_B + a2 J^t r_A + a3 J^t J k, with the
    local-term correction subtracted from a1 when ``local`` is set.
    Returns ``(value, grad, coeffs)`` where ``coeffs = (a1, a2, a3)``.
    """
    k = np.asarray(k, dtype=float)
    jk = corr @ k
    rbk = float(r_b @ k)
    a1 = a2 = a3 = 0.0
    value = 0.0
    for nu in (1.0, -1.0):
        lam = float(np.linalg.norm(r_a + nu * jk))
        for nup in (1.0, -1.0):
            p = 0.25 * (1.0 + nu * rbk + nup * lam)
            value += float(f_array(p, kind, q))
            fp = float(fprime_array(p, kind, q))
            a1 += 0.25 * fp * nu
            if lam > 0.0:
                a2 += 0.25 * fp * nu * nup / lam
                a3 += 0.25 * fp * nup / lam
    if local:
        eta = 0.0
        for nu in (1.0, -1.0):
            pb = 0.5 * (1.0 + nu * rbk)
            value -= float(f_array(pb, kind, q))
            eta += 0.5 * nu * float(fprime_array(pb, kind, q))
        a1 -= eta
    grad = a1 * r_b + a2 * (corr.T @ r_a) + a3 * (corr.T @ jk)
    return value, grad, (a1, a2, a3)


def pfaffian(a):
    """Pfaffian of a real antisymmetric matrix (Parlett-Reid with pivoting)."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n % 2:
        return 0.0
    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        piv = a[k + 1, k]
        if piv == 0.0:
            return 0.0
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)
