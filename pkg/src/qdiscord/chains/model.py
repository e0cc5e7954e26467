"""Chain specifications, dense Hamiltonians and the S_z parity.

The Hamiltonian is

    H = sum_i B_i s_iz - 1/2 sum_{mu} sum_{i != j} J_mu[i, j] s_imu s_jmu

with dimensionless spins. Local basis states are ordered by decreasing
``s_z`` (index 0 is spin up), so for s = 1/2 the standard Pauli basis is
used. The chain reference state ``|0_j>`` of the product ansatz is the
spin-down state, and the parity ``prod_j exp[i pi (s_jz + s_j)]`` counts
excitations above it: it is +1 on the all-down state.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from ..errors import DomainError

MAX_DENSE_DIM = 2**14

GEOMETRIES = ("general", "cyclic_nn", "open_nn", "fully_connected")


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """Spins ``s`` on ``n`` sites with XYZ couplings and a transverse field.

    Use the ``cyclic``/``open``/``fully_connected`` constructors for the
    structured geometries; ``couplings`` then holds the scalar ``(Jx, Jy, Jz)``.
    """

    n: int
    s: float
    Jx: np.ndarray
    Jy: np.ndarray
    Jz: np.ndarray
    B: np.ndarray
    geometry: str = "general"
    couplings: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("a chain needs at least two sites")
        if self.s <= 0 or abs(2 * self.s - round(2 * self.s)) > 1e-12:
            raise DomainError(f"spin must be a positive half-integer, got {self.s}")
        if self.geometry not in GEOMETRIES:
            raise DomainError(f"unknown geometry {self.geometry!r}")
        for name in ("Jx", "Jy", "Jz"):
            m = np.asarray(getattr(self, name), dtype=float)
            if m.shape != (self.n, self.n):
                raise DomainError(f"{name} must be {self.n}x{self.n}")
            if not np.allclose(m, m.T, atol=1e-14) or np.any(np.diag(m) != 0):
                raise DomainError(f"{name} must be symmetric with zero diagonal")
            object.__setattr__(self, name, m)
        b = np.broadcast_to(np.asarray(self.B, dtype=float), (self.n,)).copy()
        object.__setattr__(self, "B", b)

    @property
    def local_dim(self):
        return int(round(2 * self.s)) + 1

    @property
    def dim(self):
        return self.local_dim**self.n

    @property
    def uniform_field(self):
        return bool(np.all(self.B == self.B[0]))

    def with_field(self, field):
        return ChainSpec(self.n, self.s, self.Jx, self.Jy, self.Jz, field,
                         self.geometry, self.couplings)

    @classmethod
    def cyclic(cls, n, jx, jy, jz=0.0, field=0.0, s=0.5):
        adj = np.zeros((n, n))
        for i in range(n):
            adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = 1.0
        return cls(n, s, jx * adj, jy * adj, jz * adj, field, "cyclic_nn", (jx, jy, jz))

    @classmethod
    def open(cls, n, jx, jy, jz=0.0, field=0.0, s=0.5):
        adj = np.zeros((n, n))
        for i in range(n - 1):
            adj[i, i + 1] = adj[i + 1, i] = 1.0
        return cls(n, s, jx * adj, jy * adj, jz * adj, field, "open_nn", (jx, jy, jz))

    @classmethod
    def fully_connected(cls, n, jx, jy, jz=0.0, field=0.0, s=0.5):
        adj = (np.ones((n, n)) - np.eye(n)) * 2.0 / (n - 1)
        return cls(n, s, jx * adj, jy * adj, jz * adj, field, "fully_connected", (jx, jy, jz))


def spin_matrices(s):
    """``(s_x, s_y, s_z)`` for spin ``s`` in the basis ``m = s, s-1, ..., -s``."""
    d = int(round(2 * s)) + 1
    m = s - np.arange(d)
    sp_ = np.zeros((d, d))
    for a in range(1, d):
        # s_+ |m_a> = c |m_{a-1}>
        sp_[a - 1, a] = np.sqrt(s * (s + 1) - m[a] * (m[a] + 1))
    sx = 0.5 * (sp_ + sp_.T)
    sy = -0.5j * (sp_ - sp_.T)
    return sx.astype(complex), sy, np.diag(m).astype(complex)


def _site_op(op, i, n, d):
    left = sp.identity(d**i, format="csr")
    right = sp.identity(d ** (n - i - 1), format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def _check_size(spec):
    if spec.dim > MAX_DENSE_DIM:
        raise DomainError(f"Hilbert space dimension {spec.dim} exceeds {MAX_DENSE_DIM}")


def build_hamiltonian(spec):
    """Sparse (CSR) Hamiltonian; real-valued since ``s_y s_y`` is real."""
    _check_size(spec)
    n, d = spec.n, spec.local_dim
    sx, sy, sz = spin_matrices(spec.s)
    # s_y (x) s_y = -(s+ - s-)(x)(s+ - s-)/4 is real; keep i*s_y as a real matrix
    isy = (1j * sy).real
    ops = {
        "x": [_site_op(sx.real, i, n, d) for i in range(n)],
        "y": [_site_op(isy, i, n, d) for i in range(n)],
        "z": [_site_op(sz.real, i, n, d) for i in range(n)],
    }
    h = sp.csr_matrix((spec.dim, spec.dim))
    for i in range(n):
        if spec.B[i] != 0:
            h = h + spec.B[i] * ops["z"][i]
    for i in range(n):
        for j in range(i + 1, n):
            if spec.Jx[i, j]:
                h = h - spec.Jx[i, j] * (ops["x"][i] @ ops["x"][j])
            if spec.Jy[i, j]:
                # (i s_y)(i s_y) = -s_y s_y
                h = h + spec.Jy[i, j] * (ops["y"][i] @ ops["y"][j])
            if spec.Jz[i, j]:
                h = h - spec.Jz[i, j] * (ops["z"][i] @ ops["z"][j])
    return h.tocsr()


def build_hamiltonian_dense(spec):
    return build_hamiltonian(spec).toarray()


def parity_diagonal(n, s=0.5):
    """Diagonal of the parity operator in the standard product basis."""
    d = int(round(2 * s)) + 1
    # excitations above spin-down on a site with local index a: 2s - a
    local = (-1.0) ** (round(2 * s) - np.arange(d))
    out = np.ones(1)
    for _ in range(n):
        out = np.kron(out, local)
    return out


def parity_operator(n, s=0.5):
    if (int(round(2 * s)) + 1) ** n > MAX_DENSE_DIM:
        raise DomainError("parity operator too large for a dense matrix")
    return np.diag(parity_diagonal(n, s))


def product_state(thetas, s=0.5):
    """Dense ket ``prod_j exp(-i theta_j s_y) |down>``."""
    _, sy, _ = spin_matrices(s)
    d = sy.shape[0]
    down = np.zeros(d, dtype=complex)
    down[-1] = 1.0
    psi = np.ones(1, dtype=complex)
    for th in np.atleast_1d(thetas):
        psi = np.kron(psi, expm(-1j * th * sy) @ down)
    return psi


@dataclass
class SectorState:
    """Lowest state of one parity sector.

    ``data`` is a dense ket, a Majorana covariance matrix or a symmetric-block
    vector depending on the solver.
    """

    parity: int
    energy: float
    data: np.ndarray


@dataclass
class GroundStateResult:
    energy: float
    parity: int
    representation: str
    degeneracy_flag: bool
    sectors: dict = field(default_factory=dict)
    n: int = 0
    # E_+ - E_-, possibly from a higher-precision evaluation than the sector energies
    splitting: Optional[float] = None

    @property
    def data(self):
        return self.sectors[self.parity].data

    @property
    def sector_energies(self):
        return {p: st.energy for p, st in self.sectors.items()}


DEGENERACY_TOL = 1e-9


def assemble_result(sectors, representation, n, splitting=None):
    """Pick the ground sector; ``splitting`` (E_+ - E_-) overrides the float
    comparison when it was computed more precisely."""
    e_plus, e_minus = sectors[1].energy, sectors[-1].energy
    diff = e_plus - e_minus if splitting is None else splitting
    parity = 1 if diff <= 0 else -1
    energy = min(e_plus, e_minus)
    degenerate = abs(diff) <= DEGENERACY_TOL * max(1.0, abs(energy))
    return GroundStateResult(energy, parity, representation, degenerate, sectors, n, diff)
