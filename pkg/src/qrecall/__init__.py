"""Teleportation-style quantum channel simulator over cyclic groups."""

__version__ = "0.1.0"

from .errors import (
    DimensionTooLargeError,
    InvalidAmplitudesError,
    ModulusMismatchError,
    NonFlatBasisError,
    NotHermitianError,
    NotInvertibleError,
    NotOrthonormalError,
    NotPositiveError,
    NotUnitTraceError,
    OutcomeImpossibleError,
    OutsideDomainError,
    QRecallError,
    SchemaError,
    ValidationError,
)
from .groupspace import (
    DEFAULT_TOL,
    AmplitudeVector,
    GroupIndex,
    LinearMap,
    add_mod,
    add_perm,
    diag_embed,
    diag_isometry,
    diag_restrict,
    group_add,
    group_sub,
    kron,
    mult_op,
    partial_trace,
    shift_op,
    sub_mod,
    sub_perm,
    tensor,
)
from .basis import (
    EntangledBasisElement,
    OrthonormalBasis,
    apply_contraction,
    contraction_norm_sq,
    entangled_gram,
    entangled_vector,
    measurement_projector,
    random_orthonormal,
)
from .states import (
    DensityOperator,
    TraceClassOperator,
    entangle,
    fidelity,
    random_density_operator,
    three_party_input,
    trace_distance,
)
from .channels import (
    ChannelDomainReport,
    MultiplicationChannel,
    ShiftChannel,
    SplittingChannel,
    apply_channel,
    apply_normalized,
    branch_channels,
    channel_matrix,
    domain_report,
    invert_pure_channel,
    is_unitary_channel,
    shift_channel,
    splitting_isometry,
)
from .teleport import (
    IMPOSSIBLE_EPS,
    MeasurementOutcome,
    OutcomeDistribution,
    memory_state_direct,
    memory_state_factorized,
    outcome_distribution,
    outcome_probability,
    recognize,
    unitary_key,
)
from .oracle import (
    ORACLE_MAX_N,
    OracleResult,
    oracle_outcome,
    projected_state_discrepancy,
)
from .scenario import Scenario, load_scenario, parse_basis, parse_channel, parse_state

__all__ = [name for name in dir() if not name.startswith("_")]
