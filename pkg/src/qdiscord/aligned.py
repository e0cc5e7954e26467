"""Mixtures of two aligned qubit pairs and their definite-parity version.

The pair state

    rho(theta, eps) ∝ |tt><tt| + |-t-t><-t-t| + eps (|tt><-t-t| + h.c.)

with ``|t> = cos(theta/2)|0> + sin(theta/2)|1>`` has Bloch data

    r_A = r_B = (0, 0, cos(theta) (1 + eps) / N)
    J = diag(sin^2, -eps sin^2, cos^2 + eps) / N,   N = 1 + eps cos^2(theta).

For ``eps = 0`` it is an equal mixture of two aligned product states; for
``eps = ±cos(theta)**(n-2)`` it is the pair state of the n-spin
definite-parity combinations of the aligned product states.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .entropy import VON_NEUMANN, f_value
from .errors import DomainError
from .states import TwoQubitBloch

THETA_C2 = float(np.arccos(np.sqrt(1.0 / 3.0)))
THETA_C3 = float(np.arccos(np.sqrt((np.sqrt(17.0) - 3.0) / 4.0)))


@dataclass(frozen=True)
class AlignedMixtureParams:
    theta: float
    epsilon: float = 0.0
    n: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi / 2 + 1e-15:
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not -1.0 < self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in (-1, 1], got {self.epsilon}")
        if self.n is not None:
            if self.n < 2:
                raise DomainError("n must be at least 2")
            if abs(abs(self.epsilon) - np.cos(self.theta) ** (self.n - 2)) > 1e-12:
                raise DomainError("|epsilon| must equal cos(theta)**(n-2)")

    @classmethod
    def definite_parity(cls, theta, n, sector):
        """Parameters of the pair state of the n-spin parity-``sector`` state."""
        if sector not in (1, -1):
            raise DomainError("sector must be +1 or -1")
        return cls(theta, sector * np.cos(theta) ** (n - 2), n)


def _one_plus_eps_cos(p, k):
    """``1 + eps cos(theta)**k``.

    For the negative-parity state ``eps = -cos^(n-2)`` this cancels as
    ``theta -> 0``; it is then evaluated as ``-expm1((n - 2 + k) log cos)``
    with ``log cos = log1p(-2 sin^2(theta/2))``.
    """
    c = np.cos(p.theta)
    if p.n is not None and p.epsilon < 0 and c > 0:
        log_c = np.log1p(-2.0 * np.sin(p.theta / 2) ** 2)
        return float(-np.expm1((p.n - 2 + k) * log_c))
    return 1.0 + p.epsilon * c**k


def aligned_state(p):
    """Bloch data of the aligned pair state (spin-up reference, ``theta = 0``
    gives ``|00><00|``)."""
    c, s2 = np.cos(p.theta), np.sin(p.theta) ** 2
    eps = p.epsilon
    norm = _one_plus_eps_cos(p, 2)
    if norm <= 0:
        raise DomainError("1 + eps cos^2(theta) must be positive")
    rz = c * _one_plus_eps_cos(p, 0) / norm
    czz = c * c * _one_plus_eps_cos(p, -2) if c > 0 else eps
    corr = np.diag([s2, -eps * s2, czz]) / norm
    return TwoQubitBloch([0.0, 0.0, rz], [0.0, 0.0, rz], corr)


def aligned_ket(theta):
    """Single-qubit ket aligned along ``(sin theta, 0, cos theta)``."""
    return np.array([np.cos(theta / 2), np.sin(theta / 2)], dtype=complex)


def aligned_discord(theta):
    """Closed-form quantum discord of the ``eps = 0`` mixture (measurement along x)."""
    if not 0.0 <= theta <= np.pi / 2 + 1e-15:
        raise DomainError(f"theta must lie in [0, pi/2], got {theta}")
    f = lambda p: f_value(VON_NEUMANN, p)  # noqa: E731
    c = np.cos(theta)
    root = np.sqrt(1.0 - 0.25 * np.sin(2 * theta) ** 2)
    total = 0.0
    for nu in (1.0, -1.0):
        total += (2 * f((1 + nu * root) / 4) - f((1 + nu * c * c) / 2) + f((1 + nu * c) / 2))
    return float(total - 1.0)


def aligned_I2(theta):
    """Geometric discord of the ``eps = 0`` mixture and the minimizing axis.

    Returns ``(value, "z")`` below ``THETA_C2`` and ``(value, "x")`` from it on.
    """
    c2, s4 = np.cos(theta) ** 2, np.sin(theta) ** 4
    if theta < THETA_C2:
        return 0.5 * s4, "z"
    return 0.5 * (c2 + c2 * c2), "x"


def aligned_I3(theta):
    """Tsallis-3 deficit of the ``eps = 0`` mixture and the minimizing axis."""
    c2, s4 = np.cos(theta) ** 2, np.sin(theta) ** 4
    if theta < THETA_C3:
        return 0.25 * s4, "z"
    return 0.25 * (c2 + 3 * c2 * c2), "x"


def aligned_concurrence(p):
    """``|eps| sin^2(theta) / (1 + eps cos^2(theta))`` and its type.

    The type is ``"parallel"`` for ``eps > 0``, ``"antiparallel"`` for
    ``eps < 0`` and ``None`` for a separable (``eps = 0``) state.
    """
    eps = p.epsilon
    value = abs(eps) * np.sin(p.theta) ** 2 / _one_plus_eps_cos(p, 2)
    kind = None if eps == 0 else ("parallel" if eps > 0 else "antiparallel")
    return float(value), kind
