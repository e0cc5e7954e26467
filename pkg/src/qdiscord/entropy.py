"""Trace-form entropies ``S_f(rho) = Tr f(rho)``.

Every variant is normalized so that ``2 f(1/2) = 1``: a maximally mixed
qubit has entropy 1 and every deficit equals 1 on a Bell state.

==========  ==========================================
kind        f(p)
==========  ==========================================
von Neumann ``-p log2 p``
linear      ``2 p (1 - p)``
Tsallis q   ``(p - p**q) / (1 - 2**(1 - q))``
==========  ==========================================
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .states import validate_state

_DOMAIN_TOL = 1e-12
_EIG_CLIP = 1e-10
_ROUNDOFF = 1e-14  # treated as exact zeros; p**q with q < 1 amplifies them


@dataclass(frozen=True)
class EntropyKind:
    name: str
    q: float = 1.0

    def __post_init__(self):
        if self.name not in ("vonNeumann", "linear", "tsallis"):
            raise DomainError(f"unknown entropy kind {self.name!r}")
        if self.name == "tsallis" and (self.q <= 0 or self.q == 1):
            raise DomainError(f"Tsallis index must be positive and != 1, got {self.q}")

    @property
    def code(self):
        return {"vonNeumann": kernels.VON_NEUMANN, "linear": kernels.LINEAR,
                "tsallis": kernels.TSALLIS}[self.name]

    @property
    def label(self):
        if self.name == "tsallis":
            return f"tsallis(q={self.q:g})"
        return self.name

    @classmethod
    def tsallis(cls, q):
        return cls("tsallis", float(q))

    @classmethod
    def parse(cls, text):
        """Build a kind from ``"vonNeumann"``, ``"linear"`` or ``"tsallis:q"``."""
        text = text.strip()
        if text.lower() in ("vonneumann", "vn", "von_neumann"):
            return VON_NEUMANN
        if text.lower() == "linear":
            return LINEAR
        if text.lower().startswith("tsallis:"):
            return cls.tsallis(float(text.split(":", 1)[1]))
        raise DomainError(f"cannot parse entropy kind {text!r}")


VON_NEUMANN = EntropyKind("vonNeumann")
LINEAR = EntropyKind("linear")
CUBIC = EntropyKind.tsallis(3.0)


def _tsallis_norm(q):
    return 1.0 - 2.0 ** (1.0 - q)


def _check_domain(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -_DOMAIN_TOL) or np.any(p > 1.0 + _DOMAIN_TOL):
        raise DomainError("probability outside [0, 1]")
    return np.clip(p, 0.0, 1.0)


def f_value(kind, p):
    """``f(p)``; accepts scalars or arrays."""
    p = _check_domain(p)
    if kind.name == "vonNeumann":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    elif kind.name == "linear":
        out = 2.0 * p * (1.0 - p)
    else:
        out = (p - p**kind.q) / _tsallis_norm(kind.q)
    return out[()] if out.ndim == 0 else out


def f_derivative(kind, p):
    """``f'(p)``.

    Raises
    ------
    DomainError
        For the von Neumann kind at ``p = 0``, where ``f'`` diverges.
    """
    p = _check_domain(p)
    if kind.name == "vonNeumann":
        if np.any(p <= 0):
            raise DomainError("von Neumann f' diverges at p = 0")
        out = -(np.log(p) + 1.0) / np.log(2.0)
    elif kind.name == "linear":
        out = 2.0 - 4.0 * p
    else:
        if kind.q < 1 and np.any(p <= 0):
            raise DomainError(f"Tsallis f' diverges at p = 0 for q = {kind.q}")
        out = (1.0 - kind.q * p ** (kind.q - 1.0)) / _tsallis_norm(kind.q)
    return out[()] if out.ndim == 0 else out


def f_second(kind, p):
    """``f''(p)`` (used for the small-noise expansion of the deficit)."""
    p = _check_domain(p)
    if kind.name == "vonNeumann":
        out = -1.0 / (p * np.log(2.0))
    elif kind.name == "linear":
        out = np.full_like(p, -4.0)
    else:
        out = -kind.q * (kind.q - 1.0) * p ** (kind.q - 2.0) / _tsallis_norm(kind.q)
    return out[()] if out.ndim == 0 else out


def spectral_entropy(kind, probs):
    """``sum_k f(p_k)`` for a probability vector (eigenvalues near 0 clipped)."""
    p = np.asarray(probs, dtype=float)
    p = np.where((p < _ROUNDOFF) & (p > -_EIG_CLIP), 0.0, p)
    # fixed summation order makes the result exactly permutation invariant
    return float(np.sum(np.sort(f_value(kind, p))))


def entropy(kind, rho):
    """``S_f(rho)`` of a valid density matrix, from its eigenvalues."""
    rho = validate_state(rho)
    return spectral_entropy(kind, np.linalg.eigvalsh(rho))
