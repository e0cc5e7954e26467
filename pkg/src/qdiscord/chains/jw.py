"""Parity-resolved free-fermion solution of the cyclic spin-1/2 XY chain.

Sites are mapped to Majorana operators

    gamma_{2i}   = S_i sigma_x^i,   gamma_{2i+1} = S_i sigma_y^i,
    S_i = prod_{j<i} (-sigma_z^j),

so that ``-sigma_z = i gamma_{2i} gamma_{2i+1}`` and the parity is
``P = prod_i (i gamma_{2i} gamma_{2i+1})``. Within the sector of parity P
the chain Hamiltonian equals the quadratic form ``(i/4) gamma^T A gamma``
with the boundary bond multiplied by ``-P``. The lowest state of each
sector is represented by its Majorana covariance

    <gamma_a gamma_b> = delta_ab + i Gamma_ab.

Sector energies are also evaluated in momentum space with mpmath, which
resolves the exponentially small splittings that decide the ground-state
parity at small fields.
"""

import mpmath
import numpy as np
from scipy.linalg import schur

from ..errors import DomainError, UnsupportedSpecError
from ..kernels import pfaffian
from .model import SectorState, assemble_result
from .pairs import PairObservables

_ZERO_MODE_TOL = 1e-13


def _check_supported(spec):
    if spec.geometry != "cyclic_nn" or spec.couplings is None:
        raise UnsupportedSpecError("free-fermion solver needs a cyclic nearest-neighbour chain")
    if spec.s != 0.5:
        raise UnsupportedSpecError("free-fermion solver is spin-1/2 only")
    if spec.couplings[2] != 0:
        raise UnsupportedSpecError("free-fermion solver needs Jz = 0")
    if not spec.uniform_field:
        raise UnsupportedSpecError("free-fermion solver needs a uniform field")
    if spec.n < 3:
        raise UnsupportedSpecError("free-fermion solver needs n >= 3")


def majorana_matrix(n, jx, jy, field, parity):
    """Antisymmetric ``A`` with ``H_P = (i/4) gamma^T A gamma``."""
    a = np.zeros((2 * n, 2 * n))
    for i in range(n):
        a[2 * i, 2 * i + 1] = -field
        j = (i + 1) % n
        bf = 1.0 if j else -float(parity)
        a[2 * i + 1, 2 * j] = -0.5 * jx * bf
        a[2 * i, 2 * j + 1] = 0.5 * jy * bf
    return a - a.T


def _canonical_form(a):
    """Orthogonal ``W`` and ``eps >= 0`` with ``W A W^T = (+) [[0, eps], [-eps, 0]]``."""
    t, z = schur(a, output="real")
    m = a.shape[0]
    cols, eps, zeros = [], [], []
    i = 0
    while i < m:
        if i + 1 < m and abs(t[i + 1, i]) > _ZERO_MODE_TOL:
            e = t[i, i + 1]
            pair = [i, i + 1] if e >= 0 else [i + 1, i]
            cols += pair
            eps.append(abs(e))
            i += 2
        else:
            zeros.append(i)
            i += 1
    for k in range(0, len(zeros) - 1, 2):
        cols += [zeros[k], zeros[k + 1]]
        eps.append(0.0)
    return z[:, cols].T, np.array(eps)


def sector_covariance(n, jx, jy, field, parity):
    """Covariance of the lowest state of parity ``parity`` and its energy."""
    a = majorana_matrix(n, jx, jy, field, parity)
    w, eps = _canonical_form(a)
    blocks = np.ones(n)
    state_parity = (-1) ** n * np.sign(np.linalg.det(w))
    if state_parity != parity:
        blocks[int(np.argmin(eps))] = -1.0
    g = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    g[2 * idx, 2 * idx + 1] = blocks
    g[2 * idx + 1, 2 * idx] = -blocks
    gamma = w.T @ g @ w
    energy = 0.25 * float(np.trace(a @ gamma))
    return gamma, energy


def jw_sector_energies(n, jx, jy, field, dps=None):
    """Lowest energies ``(E_+, E_-)`` of both parity sectors as mpmath numbers.

    Uses the quasiparticle energies

        eps_k = sqrt((B - Jbar cos k)^2 + Delta^2 sin^2 k),
        Jbar = (Jx + Jy)/2,  Delta = (Jx - Jy)/2,

    with ``k = (2m+1) pi/n`` for P = +1 and ``k = 2 pi m/n`` for P = -1.
    The unpaired momenta ``k = 0, pi`` are occupied when ``B - Jbar cos k < 0``;
    if the resulting fermion parity is wrong the cheapest excitation is added.
    """
    if dps is None:
        dps = n + 30
    with mpmath.workdps(dps):
        jx, jy, b = mpmath.mpf(jx), mpmath.mpf(jy), mpmath.mpf(field)
        jbar, delta = (jx + jy) / 2, (jx - jy) / 2
        out = {}
        for parity, offset in ((1, 1), (-1, 0)):
            eps, occupied = [], 0
            for m in range(n):
                two_m = 2 * m + offset  # k = two_m * pi / n
                xi = b - jbar * mpmath.cospi(mpmath.mpf(two_m) / n)
                if two_m % n == 0:
                    eps.append(abs(xi))
                    occupied += xi < 0
                else:
                    s = mpmath.sinpi(mpmath.mpf(two_m) / n)
                    eps.append(mpmath.sqrt(xi * xi + delta * delta * s * s))
            energy = -mpmath.fsum(eps) / 2
            if (-1) ** occupied != parity:
                energy += min(eps)
            out[parity] = energy
        return out[1], out[-1]


def ground_state_jw(spec, dps=None):
    """Lowest state of each parity sector of a cyclic spin-1/2 XY chain.

    Raises
    ------
    UnsupportedSpecError
        Outside cyclic nearest-neighbour, s = 1/2, Jz = 0, uniform field, n >= 3.
    """
    _check_supported(spec)
    n = spec.n
    jx, jy, _ = spec.couplings
    field = float(spec.B[0])
    e_plus, e_minus = jw_sector_energies(n, jx, jy, field, dps)
    sectors = {}
    for p, e in ((1, e_plus), (-1, e_minus)):
        gamma, _ = sector_covariance(n, jx, jy, field, p)
        sectors[p] = SectorState(p, float(e), gamma)
    return assemble_result(sectors, "fermionic_covariance", n, float(e_plus - e_minus))


def _pf(gamma, idx):
    return pfaffian(gamma[np.ix_(idx, idx)])


def pair_observables_jw(gamma, i, j):
    """Pauli expectation values of sites ``i`` and ``j`` from a covariance.

    The string correlators are Pfaffians of ``2|j-i|``-dimensional
    submatrices of ``gamma``.

    Returns
    -------
    PairObservables
    """
    if i == j:
        raise DomainError("pair observables need two distinct sites")
    i, j = min(i, j), max(i, j)
    d = j - i
    sign = -1.0 if d % 2 else 1.0
    xi, yi, xj, yj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    inner = list(range(2 * i + 2, 2 * j))
    cxx = sign * _pf(gamma, list(range(yi, xj + 1)))
    cyy = -sign * _pf(gamma, [xi] + inner + [yj])
    cxy = sign * _pf(gamma, [yi] + inner + [yj])
    cyx = -sign * _pf(gamma, [xi] + inner + [xj])
    return PairObservables(
        mz_i=float(gamma[xi, yi]),
        mz_j=float(gamma[xj, yj]),
        czz=_pf(gamma, [xi, yi, xj, yj]),
        cxx=cxx,
        cyy=cyy,
        cxy_anti=0.5 * (cxy - cyx),
        cxy_sym=0.5 * (cxy + cyx),
    )
