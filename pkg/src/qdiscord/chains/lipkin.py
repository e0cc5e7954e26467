"""Fully connected spin-1/2 array restricted to the maximal-spin block.

With ``J^{ij} = 2 J_mu / (n - 1)`` the Hamiltonian becomes, in terms of the
total spin,

    H = B S_z - sum_mu J_mu (S_mu^2 - n/4) / (n - 1),

and its ground state lies in the ``S = n/2`` block. The block basis is
``M = S, S-1, ..., -S``; ``|S, M>`` has ``M + n/2`` spins up, so its parity
is ``(-1)^(M + n/2)`` and each parity sector is tridiagonal in ``M``.
"""

import itertools

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

from ..errors import DomainError, InvalidStateError
from ..states import TwoQubitBloch, bloch_compose
from .model import SectorState, assemble_result, spin_matrices


def _collective_ops(n):
    return spin_matrices(n / 2)


def lipkin_block(n, jx, jy, field, jz=0.0):
    """Real Hamiltonian matrix on the ``S = n/2`` block."""
    sx, sy, sz = _collective_ops(n)
    c = n / 4.0 * np.eye(n + 1)
    h = field * sz - (jx * (sx @ sx - c) + jy * (sy @ sy - c) + jz * (sz @ sz - c)) / (n - 1)
    return h.real


def block_parities(n):
    return (-1) ** (n - np.arange(n + 1))  # index a has n - a spins up


def _sector_tridiagonal(h, idx):
    sub = h[np.ix_(idx, idx)]
    return np.diag(sub).copy(), np.diag(sub, 1).copy()


def _sector_tridiagonal_mp(n, jx, jy, field, parity):
    """Exact (mpmath) diagonal and squared off-diagonal of one parity sector.

    ``<M|S_x^2|M> = <M|S_y^2|M> = (S(S+1) - M^2)/2`` and
    ``<M+2|S_x^2|M> = -<M+2|S_y^2|M> = c_+(M) c_+(M+1)/4``.
    """
    jx, jy, b = mpmath.mpf(jx), mpmath.mpf(jy), mpmath.mpf(field)
    half = mpmath.mpf(n) / 2
    ss = half * (half + 1)
    ms = [half - a for a in range(n + 1) if (-1) ** (n - a) == parity]
    diag = [b * m - (jx + jy) / (n - 1) * ((ss - m * m) / 2 - half / 2) for m in ms]
    scale = ((jx - jy) / (4 * (n - 1))) ** 2
    off2 = [scale * (ss - m * (m + 1)) * (ss - (m + 1) * (m + 2)) for m in ms[1:]]
    return diag, off2


def _lowest_mp(diag, e2, guess, dps):
    """Lowest root of the tridiagonal characteristic polynomial by Newton's method."""
    lam = mpmath.mpf(guess)
    tol = mpmath.mpf(10) ** (-dps + 5)
    for _ in range(100):
        # p_k and p_k' of the leading principal minors of (T - lam)
        p0, p1 = mpmath.mpf(1), diag[0] - lam
        q0, q1 = mpmath.mpf(0), mpmath.mpf(-1)
        for k in range(1, len(diag)):
            p0, p1, q0, q1 = (p1, (diag[k] - lam) * p1 - e2[k - 1] * p0,
                              q1, (diag[k] - lam) * q1 - p1 - e2[k - 1] * q0)
        step = p1 / q1
        lam -= step
        if abs(step) <= tol * max(1, abs(lam)):
            break
    return lam


def lipkin_sector_energies(n, jx, jy, field, dps=None):
    """Lowest ``(E_+, E_-)`` of the symmetric block as mpmath numbers."""
    if dps is None:
        dps = n + 30
    h = lipkin_block(n, jx, jy, field)
    par = block_parities(n)
    out = {}
    with mpmath.workdps(dps):
        for p in (1, -1):
            idx = np.flatnonzero(par == p)
            diag, off = _sector_tridiagonal(h, idx)
            guess = eigh_tridiagonal(diag, off, eigvals_only=True,
                                     select="i", select_range=(0, 0))[0]
            out[p] = _lowest_mp(*_sector_tridiagonal_mp(n, jx, jy, field, p), guess, dps)
    return out[1], out[-1]


def lipkin_ground_state(n, jx, jy, field, dps=None):
    """Lowest state of each parity sector of the fully connected XY array.

    ``data`` of each sector is a real vector of length ``n + 1`` in the
    block basis.
    """
    if n < 2:
        raise DomainError("n must be at least 2")
    h = lipkin_block(n, jx, jy, field)
    par = block_parities(n)
    e_mp = dict(zip((1, -1), lipkin_sector_energies(n, jx, jy, field, dps)))
    sectors = {}
    for p in (1, -1):
        idx = np.flatnonzero(par == p)
        diag, off = _sector_tridiagonal(h, idx)
        _, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
        vec = np.zeros(n + 1)
        vec[idx] = v[:, 0]
        sectors[p] = SectorState(p, float(e_mp[p]), vec)
    return assemble_result(sectors, "collective_block_vector", n,
                           float(e_mp[1] - e_mp[-1]))


def pair_rdm_symmetric_bloch(block_vector, n):
    """Bloch data of the pair state of a permutation-symmetric n-qubit state.

    Uses ``r = 2<S>/n`` and ``J_mu,nu = (2<{S_mu, S_nu}> - n delta) / (n (n-1))``.
    """
    v = np.asarray(block_vector, dtype=complex)
    if v.shape != (n + 1,):
        raise InvalidStateError(f"block vector must have length {n + 1}")
    if abs(np.vdot(v, v).real - 1.0) > 1e-10:
        raise InvalidStateError("block vector is not normalized")
    ops = _collective_ops(n)
    mean = np.array([np.vdot(v, s @ v).real for s in ops])
    corr = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            anti = ops[a] @ ops[b] + ops[b] @ ops[a]
            corr[a, b] = (2 * np.vdot(v, anti @ v).real - n * (a == b)) / (n * (n - 1))
    r = 2 * mean / n
    return TwoQubitBloch(r, r, corr)


def pair_rdm_symmetric(block_vector, n):
    return bloch_compose(pair_rdm_symmetric_bloch(block_vector, n))


def symmetric_to_dense(block_vector, n):
    """Embed a block vector into the full ``2**n`` product basis (Dicke states)."""
    v = np.asarray(block_vector, dtype=complex)
    psi = np.zeros(2**n, dtype=complex)
    for a in range(n + 1):
        if v[a] == 0:
            continue
        # a spins down; down is local index 1, i.e. a set bit
        combos = list(itertools.combinations(range(n), a))
        amp = v[a] / np.sqrt(len(combos))
        for c in combos:
            psi[sum(1 << (n - 1 - k) for k in c)] = amp
    return psi
