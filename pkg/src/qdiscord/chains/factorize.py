"""Conditions for a product state to be an exact eigenstate, and the uniform
transverse factorizing field."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .model import ChainSpec


@dataclass
class FactorizationResiduals:
    pair: np.ndarray  # n x n, zero diagonal
    site: np.ndarray  # n

    def max(self):
        return float(max(np.max(np.abs(self.pair)), np.max(np.abs(self.site))))


def check_factorization(spec, thetas):
    """Residuals of the pair and site conditions for the product state with
    angles ``thetas`` (each spin rotated by ``theta_j`` about y from down).

    pair[i, j] = Jy - Jx cos_i cos_j - Jz sin_i sin_j
    site[i]    = B_i sin_i - sum_j (s - delta_ij / 2)(Jx cos_i sin_j - Jz sin_i cos_j)
    """
    th = np.broadcast_to(np.asarray(thetas, dtype=float), (spec.n,))
    c, s = np.cos(th), np.sin(th)
    pair = spec.Jy - spec.Jx * np.outer(c, c) - spec.Jz * np.outer(s, s)
    np.fill_diagonal(pair, 0.0)
    weight = spec.s - 0.5 * np.eye(spec.n)
    terms = weight * (spec.Jx * np.outer(c, s) - spec.Jz * np.outer(s, c))
    site = spec.B * s - terms.sum(axis=1)
    return FactorizationResiduals(pair, site)


@dataclass
class FactorizingField:
    theta: float
    chi: float
    fields: np.ndarray
    B_s: float
    swapped_xy: bool
    spec: ChainSpec  # couplings actually used (x and y exchanged if swapped_xy)

    @property
    def boundary_fields(self):
        return self.fields[0], self.fields[-1]


def uniform_factorizing_field(spec):
    """Uniform-angle solution ``cos^2 theta = chi`` and the fields it needs.

    ``chi = (Jy - Jz)/(Jx - Jz)`` must be the same for every coupled pair.
    If ``chi > 1`` the x and y axes are exchanged first (``chi -> 1/chi``).

    Raises
    ------
    DomainError
        If ``chi`` is undefined, not constant, or negative.
    """
    coupled = (spec.Jx != 0) | (spec.Jy != 0) | (spec.Jz != 0)
    np.fill_diagonal(coupled, False)
    if not coupled.any():
        raise DomainError("chain has no couplings")
    dx = spec.Jx[coupled] - spec.Jz[coupled]
    dy = spec.Jy[coupled] - spec.Jz[coupled]
    if np.any(np.abs(dx) < 1e-14):
        raise DomainError("anisotropy undefined: Jx = Jz on a coupled pair")
    ratios = dy / dx
    if np.ptp(ratios) > 1e-12:
        raise DomainError("anisotropy is not constant over coupled pairs")
    chi = float(ratios[0])
    if chi < 0:
        raise DomainError(f"no real uniform solution: chi = {chi} < 0")
    swapped = chi > 1
    if swapped:
        spec = ChainSpec(spec.n, spec.s, spec.Jy, spec.Jx, spec.Jz, spec.B, spec.geometry,
                         None if spec.couplings is None
                         else (spec.couplings[1], spec.couplings[0], spec.couplings[2]))
        chi = 1.0 / chi
    theta = float(np.arccos(np.sqrt(chi)))
    weight = spec.s - 0.5 * np.eye(spec.n)
    fields = np.sqrt(chi) * ((spec.Jx - spec.Jz) * weight).sum(axis=1)
    return FactorizingField(theta, chi, fields, float(np.max(np.abs(fields))), swapped,
                            spec.with_field(fields))
