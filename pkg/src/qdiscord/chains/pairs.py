"""Two-site reduced states assembled from chain observables."""

from dataclasses import dataclass

import numpy as np

from ..aligned import AlignedMixtureParams, aligned_state
from ..errors import DomainError, InvalidStateError
from ..states import TwoQubitBloch, bloch_compose

# looser than the generic positivity tolerance: observables come from long
# products of correlation-matrix entries
PAIR_POSITIVITY_TOL = -1e-9


@dataclass(frozen=True)
class PairObservables:
    """Pauli expectation values of a parity-symmetric pair.

    ``cxy_anti`` and ``cxy_sym`` are the antisymmetric and symmetric parts of
    ``<sigma_x sigma_y>`` and ``<sigma_y sigma_x>``; both vanish for real
    ground states.
    """

    mz_i: float
    mz_j: float
    czz: float
    cxx: float
    cyy: float
    cxy_anti: float = 0.0
    cxy_sym: float = 0.0

    def bloch(self):
        corr = np.array([
            [self.cxx, self.cxy_sym + self.cxy_anti, 0.0],
            [self.cxy_sym - self.cxy_anti, self.cyy, 0.0],
            [0.0, 0.0, self.czz],
        ])
        return TwoQubitBloch([0.0, 0.0, self.mz_i], [0.0, 0.0, self.mz_j], corr)


def pair_rdm_from_observables(obs):
    """X-state density matrix of a pair; raises if it is not positive."""
    rho = bloch_compose(obs.bloch())
    low = float(np.linalg.eigvalsh(rho)[0])
    if low < PAIR_POSITIVITY_TOL:
        raise InvalidStateError(f"inconsistent pair observables: min eigenvalue {low:.3e}")
    return rho


def definite_parity_bloch(theta, n, sector):
    """Bloch data of the pair state of ``|Theta> + sector |-Theta>`` (n spins).

    Spins are tilted from the spin-down reference, so the z components are
    the negatives of those of the spin-up aligned state.
    """
    if not 0.0 < theta <= np.pi / 2 + 1e-15:
        raise DomainError("theta must lie in (0, pi/2]")
    if n < 3:
        raise DomainError("n must be at least 3")
    b = aligned_state(AlignedMixtureParams.definite_parity(theta, n, sector))
    return TwoQubitBloch(-b.r_a, -b.r_b, b.J)


def definite_parity_pair_state(theta, n, sector):
    return bloch_compose(definite_parity_bloch(theta, n, sector))
