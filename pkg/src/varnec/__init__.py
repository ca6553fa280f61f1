"""Network error-correction MDS codes on acyclic multicast networks, with variable-rate families."""

from .code import NecCode, decoding_matrix, example_code, is_regular, transmit, zero_code
from .decoder import decode, simulate
from .errors import (
    ConstructionError,
    DomainError,
    EnumerationLimitError,
    FamilyError,
    UsageError,
    VarnecError,
)
from .ff import FieldElement, FieldMatrix, FieldSpec, mat_intersection_dim, mat_rank, mat_solve_row
from .metrics import (
    DistanceReport,
    compute_Q,
    error_space,
    intersects,
    is_mds,
    message_space,
    min_distance,
    min_distance_oracle,
    verify_mds,
)
from .randomized import (
    JointBounds,
    ProbabilityReport,
    TrialConfig,
    estimate_success,
    joint_lower_bound,
    mds_lower_bound,
    random_code,
)
from .topology import (
    Channel,
    ErrorPattern,
    Network,
    NetworkValidationError,
    combination_network,
    enumerate_Rt,
    example_network,
    min_cut,
    pattern_rank,
    validate,
)
from .variable_rate import (
    CodeFamily,
    build_family,
    choose_k,
    construct_mds,
    field_size_bound,
    forbidden_hyperplanes,
    reduce_rate,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "CodeFamily",
    "ConstructionError",
    "DistanceReport",
    "DomainError",
    "EnumerationLimitError",
    "ErrorPattern",
    "FamilyError",
    "FieldElement",
    "FieldMatrix",
    "FieldSpec",
    "JointBounds",
    "NecCode",
    "Network",
    "NetworkValidationError",
    "ProbabilityReport",
    "TrialConfig",
    "UsageError",
    "VarnecError",
    "build_family",
    "choose_k",
    "combination_network",
    "compute_Q",
    "construct_mds",
    "decode",
    "decoding_matrix",
    "enumerate_Rt",
    "error_space",
    "estimate_success",
    "example_code",
    "example_network",
    "field_size_bound",
    "forbidden_hyperplanes",
    "intersects",
    "is_mds",
    "is_regular",
    "joint_lower_bound",
    "mat_intersection_dim",
    "mat_rank",
    "mat_solve_row",
    "mds_lower_bound",
    "message_space",
    "min_cut",
    "min_distance",
    "min_distance_oracle",
    "pattern_rank",
    "random_code",
    "reduce_rate",
    "simulate",
    "transmit",
    "validate",
    "verify_mds",
    "zero_code",
]
