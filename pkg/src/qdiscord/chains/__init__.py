"""Spin chains: specifications, factorization and exact ground states."""

from .dense import energy_expectation, ground_state_dense, pair_rdm_dense
from .factorize import check_factorization, uniform_factorizing_field
from .jw import ground_state_jw, jw_sector_energies, pair_observables_jw
from .lipkin import (
    lipkin_ground_state,
    lipkin_sector_energies,
    pair_rdm_symmetric,
    pair_rdm_symmetric_bloch,
    symmetric_to_dense,
)
from .model import (
    ChainSpec,
    GroundStateResult,
    build_hamiltonian,
    build_hamiltonian_dense,
    parity_diagonal,
    parity_operator,
    product_state,
    spin_matrices,
)
from .pairs import (
    PairObservables,
    definite_parity_bloch,
    definite_parity_pair_state,
    pair_rdm_from_observables,
)
from .crossings import is_degenerate, parity_transitions, sector_splitting
