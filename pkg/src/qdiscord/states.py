"""Dense state algebra: Bloch form of two-qubit states, partial traces,
hermitian spectra, concurrence and Schmidt decompositions.

Conventions
-----------
Pauli matrices are the standard ones, with ``sigma_z |0> = +|0>`` (spin up)
and tensor order ``A (x) B``. Spin-chain code uses the spin-down state as
its reference, i.e. the ``sigma_z = -1`` eigenvector ``|1>``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .errors import DomainError, InvalidStateError

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = -1e-10


def validate_state(rho, dim=None, herm_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL,
                   pos_tol=POSITIVITY_TOL):
    """Return ``rho`` as a complex array after checking it is a density matrix.

    Raises
    ------
    InvalidStateError
        If ``rho`` is not square (of size ``dim`` when given), not hermitian,
        not unit-trace, or has an eigenvalue below ``pos_tol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise InvalidStateError(f"expected dimension {dim}, got {rho.shape[0]}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise InvalidStateError("matrix is not hermitian")
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise InvalidStateError(f"trace is {np.trace(rho).real:.3e}, not 1")
    if np.linalg.eigvalsh(rho)[0] < pos_tol:
        raise InvalidStateError("matrix is not positive semidefinite")
    return rho


def is_valid_state(rho, **tols):
    try:
        validate_state(rho, **tols)
    except InvalidStateError:
        return False
    return True


@dataclass(frozen=True)
class TwoQubitBloch:
    """Bloch vectors and correlation matrix of a two-qubit state.

    ``J[m, n] = <sigma_A,m sigma_B,n>``.
    """

    r_a: np.ndarray
    r_b: np.ndarray
    J: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        object.__setattr__(self, "r_a", np.asarray(self.r_a, dtype=float).reshape(3))
        object.__setattr__(self, "r_b", np.asarray(self.r_b, dtype=float).reshape(3))
        object.__setattr__(self, "J", np.asarray(self.J, dtype=float).reshape(3, 3))

    def swapped(self):
        """Same state with the roles of A and B exchanged."""
        return TwoQubitBloch(self.r_b, self.r_a, self.J.T)

    def matrix(self):
        return bloch_compose(self)

    def is_mmm(self, tol=1e-12):
        """True when both marginals are maximally mixed."""
        return bool(np.linalg.norm(self.r_a) < tol and np.linalg.norm(self.r_b) < tol)


def bloch_decompose(rho):
    """Pauli decomposition of a two-qubit density matrix."""
    rho = validate_state(rho, dim=4)
    r_a = np.array([np.trace(rho @ np.kron(s, I2)).real for s in PAULIS])
    r_b = np.array([np.trace(rho @ np.kron(I2, s)).real for s in PAULIS])
    corr = np.array([[np.trace(rho @ np.kron(s, t)).real for t in PAULIS] for s in PAULIS])
    return TwoQubitBloch(r_a, r_b, corr)


def bloch_compose(b):
    """Density matrix ``(I + r_A.s_A + r_B.s_B + s_A^t J s_B)/4``.

    Hermitian and unit-trace by construction; positivity is not checked.
    """
    rho = np.eye(4, dtype=complex)
    for m, s in enumerate(PAULIS):
        rho += b.r_a[m] * np.kron(s, I2) + b.r_b[m] * np.kron(I2, s)
        for n, t in enumerate(PAULIS):
            rho += b.J[m, n] * np.kron(s, t)
    return rho / 4.0


def partial_trace(rho, dims, keep):
    """Reduced density matrix.

    Parameters
    ----------
    rho : (d, d) array
        State on the tensor product of subsystems of sizes ``dims``.
    dims : sequence of int
        Subsystem dimensions, product equal to ``d``.
    keep : {"A", "B"} or sequence of int
        ``"A"``/``"B"`` for a bipartite split, or the indices of the
        subsystems to keep (in increasing order).
    """
    rho = np.asarray(rho, dtype=complex)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != rho.shape[0] or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"subsystem dims {dims} do not match matrix of shape {rho.shape}")
    keep = _keep_indices(keep, len(dims))
    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace out from the highest axis down so lower axis numbers stay valid
    for i in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + m)
    dk = int(np.prod([dims[i] for i in keep]))
    return t.reshape(dk, dk)


def reduced_from_ket(psi, dims, keep):
    """Reduced density matrix of the pure state ``psi`` on subsystems ``keep``."""
    psi = np.asarray(psi)
    dims = tuple(int(d) for d in dims)
    if psi.size != int(np.prod(dims)):
        raise DomainError(f"subsystem dims {dims} do not match ket of size {psi.size}")
    keep = _keep_indices(keep, len(dims))
    rest = [i for i in range(len(dims)) if i not in keep]
    t = psi.reshape(dims).transpose(list(keep) + rest)
    dk = int(np.prod([dims[i] for i in keep]))
    m = t.reshape(dk, -1)
    return m @ m.conj().T


def _keep_indices(keep, n):
    if isinstance(keep, str):
        if n != 2 or keep not in ("A", "B"):
            raise DomainError(f"keep={keep!r} needs a bipartite split")
        return [0] if keep == "A" else [1]
    keep = sorted(int(k) for k in keep)
    if not keep or keep[0] < 0 or keep[-1] >= n or len(set(keep)) != len(keep):
        raise DomainError(f"invalid subsystem indices {keep}")
    return keep


def eigh(rho, tol=HERMITIAN_TOL):
    """Eigenvalues (descending) and orthonormal eigenvectors of a hermitian matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidStateError("matrix is not hermitian")
    w, v = np.linalg.eigh(rho)
    return w[::-1], v[:, ::-1]


_YY = np.kron(SY, SY)


# eigenvalues below this (relative) are treated as roundoff in ``concurrence``
_RANK_TOL = 1e-14


def concurrence(rho):
    """Wootters concurrence of a two-qubit state.

    The ``lambda_i`` are the singular values of ``A^t (sy sy) A`` with
    ``rho = A A^dag``, which avoids square roots of roundoff-level
    eigenvalues of ``rho (sy sy) rho* (sy sy)``.
    """
    rho = validate_state(rho, dim=4)
    w, v = np.linalg.eigh(rho)
    keep = w > _RANK_TOL * w[-1]
    a = v[:, keep] * np.sqrt(w[keep])
    lam = np.zeros(4)
    sv = np.linalg.svd(a.T @ _YY @ a, compute_uv=False)
    lam[:sv.size] = np.sort(sv)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class SchmidtDecomposition:
    probs: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def rank(self):
        return int(np.count_nonzero(self.probs > 1e-14))

    def ket(self):
        return np.einsum("k,ik,jk->ij", np.sqrt(self.probs), self.basis_a,
                         self.basis_b).reshape(-1)


def schmidt(psi, dims):
    """Schmidt decomposition of a normalized bipartite ket.

    ``basis_a[:, k]`` and ``basis_b[:, k]`` are the local kets paired with
    probability ``probs[k]`` (descending).
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    d_a, d_b = dims
    if psi.size != d_a * d_b:
        raise DomainError(f"ket of size {psi.size} does not match dims {dims}")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-12:
        raise InvalidStateError("ket is not normalized")
    u, s, vh = np.linalg.svd(psi.reshape(d_a, d_b), full_matrices=False)
    return SchmidtDecomposition(s**2, u, vh.T)


def ket_to_dm(psi):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def random_pure_state(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim, rng, rank=None):
    """Random state from the induced (Ginibre) measure; full rank by default."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_unitary(dim, rng):
    return unitary_group.rvs(dim, random_state=rng)


def rotation_from_unitary(u):
    """SO(3) matrix R with ``u sigma_m u^dag = sum_n R[n, m] sigma_n``."""
    r = np.empty((3, 3))
    for m, s in enumerate(PAULIS):
        rot = u @ s @ u.conj().T
        for n, t in enumerate(PAULIS):
            r[n, m] = 0.5 * np.trace(rot @ t).real
    return r
