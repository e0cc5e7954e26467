"""Quantum discord and entropic correlation measures for two-qubit states,
with exact spin-chain ground states to feed them."""

from . import chains
from .aligned import (
    THETA_C2,
    THETA_C3,
    AlignedMixtureParams,
    aligned_concurrence,
    aligned_discord,
    aligned_I2,
    aligned_I3,
    aligned_ket,
    aligned_state,
)
from .entropy import CUBIC, LINEAR, VON_NEUMANN, EntropyKind, entropy, f_derivative, f_value
from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    InvalidStateError,
    UnsupportedSpecError,
)
from .kernels import BACKEND
from .measures import (
    MeasureResult,
    conditional_entropy_measured,
    conditional_entropy_quantum,
    cubic_discord_closed,
    deficit_pure_plus_noise,
    geometric_discord_closed,
    info_deficit,
    mmm_deficit,
    mutual_information,
    one_way_deficit,
    post_measurement_spectrum,
    post_measurement_state,
    quantum_discord,
    stationarity_residual_deficit,
    stationarity_residual_discord,
)
from .states import (
    TwoQubitBloch,
    bloch_compose,
    bloch_decompose,
    concurrence,
    eigh,
    partial_trace,
    schmidt,
)

__version__ = "0.1.0"
