"""Exact diagonalization in the full product basis, resolved by parity."""

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh

from ..states import reduced_from_ket
from .model import SectorState, assemble_result, build_hamiltonian, parity_diagonal

# sector blocks up to this size are diagonalized densely
_DENSE_BLOCK = 4096


def _lowest(h_block):
    m = h_block.shape[0]
    if m <= _DENSE_BLOCK:
        w, v = eigh(h_block.toarray(), subset_by_index=[0, 0])
        return float(w[0]), v[:, 0]
    w, v = eigsh(h_block, k=1, which="SA", tol=1e-13)
    return float(w[0]), v[:, 0]


def ground_state_dense(spec):
    """Lowest state of each parity sector by exact diagonalization.

    The kets stored in ``sectors`` live in the full ``(2s+1)**n`` space.
    """
    h = build_hamiltonian(spec)
    par = parity_diagonal(spec.n, spec.s)
    sectors = {}
    for p in (1, -1):
        idx = np.flatnonzero(par == p)
        e, v = _lowest(h[idx][:, idx])
        psi = np.zeros(spec.dim)
        psi[idx] = v
        sectors[p] = SectorState(p, e, psi)
    return assemble_result(sectors, "dense_ket", spec.n)


def energy_expectation(spec, psi):
    h = build_hamiltonian(spec)
    return float(np.vdot(psi, h @ psi).real)


def pair_rdm_dense(psi, n, i, j, s=0.5):
    """Reduced state of sites ``i < j`` from a dense ket."""
    d = int(round(2 * s)) + 1
    return reduced_from_ket(psi, [d] * n, [i, j])
