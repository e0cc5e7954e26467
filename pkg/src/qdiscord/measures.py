"""Local projective measurements on two-qubit states and the correlation
measures built from them.

A spin measurement on the measured side (B by default) along the unit vector
``k`` maps the Bloch data as ``r_B -> (r_B.k) k`` and ``J -> J k k^t``. The
deficit ``I_f`` is the minimum over ``k`` of the entropy increase
``S_f(rho') - S_f(rho)``; the quantum discord additionally subtracts the
entropy increase of the measured marginal.

The minimization over the sphere uses a fixed candidate set (coordinate axes,
top eigenvectors of the quadratic-form matrices ``M2`` and ``M3``, and a
512-point Fibonacci grid), followed by quasi-Newton refinement of the best
basins with the analytic gradient. The tangential part of that gradient is the
stationarity residual reported with every result.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .entropy import LINEAR, VON_NEUMANN, CUBIC, EntropyKind, f_value, spectral_entropy
from .errors import DomainError, InvalidStateError
from .states import (I2, PAULIS, TwoQubitBloch, bloch_compose, bloch_decompose,
                     partial_trace, schmidt, validate_state)

GRID_SIZE = 512
_N_STARTS = 3
_TIE_TOL = 1e-10
_ZERO_P = 1e-13
_UNIT_TOL = 1e-12

AXES = np.eye(3)


def fibonacci_sphere(n=GRID_SIZE):
    """``n`` nearly uniform unit vectors on the sphere."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    phi = np.pi * (1.0 + 5.0**0.5) * i
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


_GRID = fibonacci_sphere()


def canonical_direction(k):
    """Representative of ``{k, -k}``: largest-magnitude component positive
    (lowest index wins on ties)."""
    k = np.asarray(k, dtype=float)
    k = k / np.linalg.norm(k)
    i = int(np.argmax(np.round(np.abs(k), 12)))
    return k if k[i] >= 0 else -k


def _unit(k):
    k = np.asarray(k, dtype=float).reshape(3)
    if abs(np.linalg.norm(k) - 1.0) > _UNIT_TOL:
        raise DomainError(f"measurement direction must be a unit vector, |k| = {np.linalg.norm(k)}")
    return k


class StationarityResidual(float):
    """Float residual carrying a ``divergent`` flag.

    ``divergent`` is set when a vanishing probability made ``f'`` infinite;
    the value is then computed with the probability floored at 1e-300 and is
    not meaningful as a convergence measure.
    """

    def __new__(cls, value, divergent=False):
        obj = super().__new__(cls, value)
        obj.divergent = bool(divergent)
        return obj


@dataclass
class MeasureResult:
    value: float
    optimal_direction: np.ndarray
    stationarity_residual: float
    candidate_values: list = field(default_factory=list)
    flags: frozenset = frozenset()

    def __float__(self):
        return float(self.value)


# -- measurement maps ------------------------------------------------------

def post_measurement_state(b, k):
    """Bloch data of the unread post-measurement state (measurement on B)."""
    k = _unit(k)
    kk = np.outer(k, k)
    return TwoQubitBloch(b.r_a, kk @ b.r_b, b.J @ kk)


def post_measurement_spectrum(b, k):
    """Eigenvalues ``p[nu, nu']`` of the post-measurement state, ordered
    (+,+), (+,-), (-,+), (-,-)."""
    k = _unit(k)
    return kernels.spectra(b.r_a, b.r_b, b.J, k[None, :])[0]


def projector_post_measurement(rho, k):
    """Dense ``sum_j Pi_j rho Pi_j`` with ``Pi_j = I (x) (1 + j k.sigma)/2``."""
    k = _unit(k)
    ks = sum(k[m] * PAULIS[m] for m in range(3))
    out = np.zeros((4, 4), dtype=complex)
    for sgn in (1.0, -1.0):
        proj = np.kron(I2, 0.5 * (I2 + sgn * ks))
        out += proj @ rho @ proj
    return out


# -- entropic building blocks ----------------------------------------------

def _rho_spectrum(b):
    return np.linalg.eigvalsh(bloch_compose(b))


def _qubit_spectrum(r):
    n = float(np.linalg.norm(r))
    return np.array([0.5 * (1.0 + n), 0.5 * (1.0 - n)])


def conditional_entropy_quantum(rho, dims=(2, 2)):
    """``S(rho_AB) - S(rho_B)`` in bits; negative for entangled pure states."""
    rho = validate_state(rho)
    rho_b = partial_trace(rho, dims, "B")
    return (spectral_entropy(VON_NEUMANN, np.linalg.eigvalsh(rho))
            - spectral_entropy(VON_NEUMANN, np.linalg.eigvalsh(rho_b)))


def conditional_entropy_measured(b, k):
    """``S(rho') - S(rho'_B)`` after measuring B along ``k``."""
    k = _unit(k)
    return float(kernels.objective_values(b.r_a, b.r_b, b.J, k[None, :],
                                          kernels.VON_NEUMANN, 1.0, True)[0])


def mutual_information(rho, dims=(2, 2)):
    """``S(rho_A) + S(rho_B) - S(rho_AB)`` in bits."""
    rho = validate_state(rho)
    s = lambda m: spectral_entropy(VON_NEUMANN, np.linalg.eigvalsh(m))  # noqa: E731
    return s(partial_trace(rho, dims, "A")) + s(partial_trace(rho, dims, "B")) - s(rho)


def relative_entropy(rho, sigma):
    """``S(rho || sigma) = Tr rho (log2 rho - log2 sigma)``.

    Returns ``inf`` when the support of ``rho`` is not contained in that of
    ``sigma``.
    """
    rho = validate_state(rho)
    sigma = validate_state(sigma)
    w, v = np.linalg.eigh(sigma)
    weights = np.real(np.einsum("ia,ij,ja->a", v.conj(), rho, v))
    on = w > 1e-14
    if np.any(weights[~on] > 1e-10):
        return float("inf")
    cross = -float(np.sum(weights[on] * np.log2(w[on])))
    return cross - spectral_entropy(VON_NEUMANN, np.linalg.eigvalsh(rho))


# -- stationarity ----------------------------------------------------------

def _probabilities_vanish(b, k, local):
    p = kernels.spectra(b.r_a, b.r_b, b.J, k[None, :])[0]
    zero = np.any(p < _ZERO_P)
    if local:
        zero = zero or np.any(_qubit_spectrum(np.dot(b.r_b, k) * k) < _ZERO_P)
    return bool(zero)


def _residual(kind, b, k, local):
    _, grad, _ = kernels.objective_gradient(b.r_a, b.r_b, b.J, k, kind.code, kind.q, local)
    res = float(np.linalg.norm(np.cross(k, grad)))
    divergent = (kind.name == "vonNeumann" or (kind.name == "tsallis" and kind.q < 1)) \
        and _probabilities_vanish(b, k, local)
    return StationarityResidual(res, divergent)


def stationarity_coefficients(kind, b, k, discord=False):
    """``(a1, a2, a3)`` of the stationarity equation at ``k``; with
    ``discord=True`` the local correction ``eta`` is already subtracted from ``a1``."""
    k = _unit(k)
    if discord:
        kind = VON_NEUMANN
    _, _, coeffs = kernels.objective_gradient(b.r_a, b.r_b, b.J, k, kind.code, kind.q, discord)
    return coeffs


def stationarity_residual_deficit(kind, b, k):
    """``|k x (a1 r_B + a2 J^t r_A + a3 J^t J k)|`` for the deficit ``I_f``."""
    return _residual(kind, b, _unit(k), False)


def stationarity_residual_discord(b, k):
    """Residual of the stationarity equation for the quantum discord."""
    return _residual(VON_NEUMANN, b, _unit(k), True)


# -- generic minimization --------------------------------------------------

def _tangent_basis(k):
    a = AXES[int(np.argmin(np.abs(k)))]
    e1 = np.cross(k, a)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(k, e1)


def _refine(b, kind, local, k0):
    e1, e2 = _tangent_basis(k0)
    code, q = kind.code, kind.q

    def chart(u):
        v = k0 + u[0] * e1 + u[1] * e2
        nv = np.linalg.norm(v)
        return v / nv, nv

    def fun(u):
        k, nv = chart(u)
        val, grad, _ = kernels.objective_gradient(b.r_a, b.r_b, b.J, k, code, q, local)
        gt = grad - k * np.dot(k, grad)
        return val, np.array([np.dot(gt, e1), np.dot(gt, e2)]) / nv

    res = minimize(fun, np.zeros(2), jac=True, method="BFGS",
                   options={"gtol": 1e-12, "maxiter": 200})
    k, _ = chart(res.x)
    val = float(kernels.objective_values(b.r_a, b.r_b, b.J, k[None, :], code, q, local)[0])
    return k, val


def _distinct_starts(dirs, vals, n):
    order = np.argsort(vals, kind="stable")
    picked = []
    for i in order:
        if all(abs(np.dot(dirs[i], dirs[j])) < 0.95 for j in picked):
            picked.append(i)
        if len(picked) == n:
            break
    return picked


def _closed_form_seeds(b):
    seeds = []
    for m in (_m2(b), _m3(b)):
        w, v = np.linalg.eigh(m)
        seeds.append(v[:, -1])
    return seeds


def _minimize(b, kind, local, seed_closed_forms=True):
    cand = [AXES[0], AXES[1], AXES[2]]
    if seed_closed_forms:
        cand += _closed_form_seeds(b)
    named = np.array(cand)
    dirs = np.vstack([named, _GRID])
    vals = kernels.objective_values(b.r_a, b.r_b, b.J, dirs, kind.code, kind.q, local)
    candidate_values = [(canonical_direction(d), float(v)) for d, v in zip(named, vals[:len(named)])]

    refined = []
    for i in _distinct_starts(dirs, vals, _N_STARTS):
        k, v = _refine(b, kind, local, dirs[i])
        refined.append((v, k))
        if vals[i] < v:  # refinement never makes things worse
            refined.append((float(vals[i]), dirs[i]))
    refined.sort(key=lambda t: t[0])
    best_val, best_k = refined[0]
    flags = set()
    for v, k in refined[1:]:
        if v - best_val < _TIE_TOL and abs(np.dot(k, best_k)) < 1 - 1e-6:
            flags.add("tie")
            break
    return best_val, canonical_direction(best_k), candidate_values, flags


def _result(value, k, residual, candidates, flags, baseline):
    flags = set(flags)
    if getattr(residual, "divergent", False):
        flags.add("divergent_derivative")
    return MeasureResult(value=float(value - baseline), optimal_direction=k,
                         stationarity_residual=residual,
                         candidate_values=[(d, v - baseline) for d, v in candidates],
                         flags=frozenset(flags))


def _oriented(b, side):
    if side == "B":
        return b
    if side == "A":
        return b.swapped()
    raise DomainError(f"side must be 'A' or 'B', got {side!r}")


def _as_bloch(state):
    if isinstance(state, TwoQubitBloch):
        return state
    return bloch_decompose(state)


def quantum_discord(b, side="B", seed_closed_forms=True):
    """Quantum discord with a projective measurement on ``side``."""
    b = _oriented(_as_bloch(b), side)
    baseline = (spectral_entropy(VON_NEUMANN, _rho_spectrum(b))
                - spectral_entropy(VON_NEUMANN, _qubit_spectrum(b.r_b)))
    val, k, cands, flags = _minimize(b, VON_NEUMANN, True, seed_closed_forms)
    return _result(val, k, _residual(VON_NEUMANN, b, k, True), cands, flags, baseline)


def info_deficit(kind, b, side="B", seed_closed_forms=True):
    """Generalized information deficit ``I_f``: least entropy increase under
    an unread projective measurement on ``side``."""
    b = _oriented(_as_bloch(b), side)
    baseline = spectral_entropy(kind, _rho_spectrum(b))
    val, k, cands, flags = _minimize(b, kind, False, seed_closed_forms)
    return _result(val, k, _residual(kind, b, k, False), cands, flags, baseline)


def one_way_deficit(b, side="B", seed_closed_forms=True):
    """One-way information deficit (von Neumann ``I_f``)."""
    return info_deficit(VON_NEUMANN, b, side, seed_closed_forms)


# -- closed forms ----------------------------------------------------------

def _m2(b):
    return np.outer(b.r_b, b.r_b) + b.J.T @ b.J


def _m3(b):
    x = np.outer(b.r_b, b.r_a) @ b.J
    return np.outer(b.r_b, b.r_b) + b.J.T @ b.J + x + x.T


def _closed(b, m, offset, scale, kind):
    w, v = np.linalg.eigh(m)
    tr = float(np.trace(m))
    flags = set()
    if w[-1] - w[-2] < _TIE_TOL * max(1.0, abs(w[-1])):
        flags.add("tie")
    cands = [(canonical_direction(v[:, i]), scale * (tr - offset - w[i])) for i in (2, 1, 0)]
    k = cands[0][0]
    return MeasureResult(value=scale * (tr - offset - w[-1]), optimal_direction=k,
                         stationarity_residual=_residual(kind, b, k, False),
                         candidate_values=cands, flags=frozenset(flags))


def geometric_discord_closed(b, side="B"):
    """Linear-entropy deficit ``(tr M2 - lambda_max)/2``, ``M2 = r_B r_B^t + J^t J``."""
    b = _oriented(_as_bloch(b), side)
    return _closed(b, _m2(b), 0.0, 0.5, LINEAR)


def cubic_discord_closed(b, side="B"):
    """Tsallis-3 deficit ``(tr M3 - 2 det J - lambda_max)/4``."""
    b = _oriented(_as_bloch(b), side)
    return _closed(b, _m3(b), 2.0 * np.linalg.det(b.J), 0.25, CUBIC)


def mmm_deficit(kind, b):
    """Deficit of a state with maximally mixed marginals.

    ``2 f((p1+p2)/2) + 2 f((p3+p4)/2) - sum_i f(p_i)`` with ``p`` the
    eigenvalues of the state in decreasing order.
    """
    b = _as_bloch(b)
    if not b.is_mmm():
        raise DomainError("mmm_deficit needs r_A = r_B = 0")
    p = np.sort(_rho_spectrum(b))[::-1]
    if p[-1] < -1e-10:
        raise InvalidStateError("Bloch data does not describe a positive state")
    p = np.clip(p, 0.0, 1.0)
    return float(2 * f_value(kind, (p[0] + p[1]) / 2) + 2 * f_value(kind, (p[2] + p[3]) / 2)
                 - spectral_entropy(kind, p))


def deficit_pure_plus_noise(kind, x, schmidt_probs, dims):
    """Closed ``I_f`` of ``x |Psi><Psi| + (1 - x) I/n`` with Schmidt
    probabilities ``schmidt_probs`` (minimizing measurement: Schmidt basis)."""
    n_a, n_b = dims
    n = n_a * n_b
    p = np.asarray(schmidt_probs, dtype=float)
    if n < 4:
        raise DomainError("need n_A * n_B >= 4")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"mixing weight must lie in [0, 1], got {x}")
    if (p.ndim != 1 or p.size > min(n_a, n_b) or np.any(p < 0)
            or abs(p.sum() - 1.0) > 1e-12 or np.any(np.diff(p) > 1e-15)):
        raise DomainError("Schmidt probabilities must be a descending probability vector "
                          "of length <= min(n_A, n_B)")
    ns = p.size
    return float(np.sum(f_value(kind, (x * (n * p - 1) + 1) / n))
                 - f_value(kind, (x * (n - 1) + 1) / n)
                 - (ns - 1) * f_value(kind, (1 - x) / n))


def entanglement_entropy(kind, psi, dims=(2, 2)):
    """``S_f`` of the reduced state of a pure bipartite ket."""
    return spectral_entropy(kind, schmidt(psi, dims).probs)


__all__ = [
    "EntropyKind", "MeasureResult", "StationarityResidual", "canonical_direction",
    "conditional_entropy_measured", "conditional_entropy_quantum", "cubic_discord_closed",
    "deficit_pure_plus_noise", "entanglement_entropy", "fibonacci_sphere",
    "geometric_discord_closed", "info_deficit", "mmm_deficit", "mutual_information",
    "one_way_deficit", "post_measurement_spectrum", "post_measurement_state",
    "projector_post_measurement", "quantum_discord", "relative_entropy",
    "stationarity_coefficients", "stationarity_residual_deficit",
    "stationarity_residual_discord",
]
