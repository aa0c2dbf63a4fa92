"""Construction, verification and exact decision of edge-count distributions
of rainbow-triangle-free (Gallai) colorings of complete graphs."""

from .core import (
    BalancedParams,
    BudgetExceeded,
    Coloring,
    Distribution,
    DivisionParams,
    GallaiError,
    GallaiPartition,
    InternalScheduleError,
    InvariantViolation,
    NonPositiveEntry,
    NotFound,
    NotGallai,
    ParseError,
    PeelImpossible,
    PreconditionViolated,
    StarPartition,
    SumMismatch,
    TooManyColors,
    Verdict,
    balanced_sizes,
    canonicalize,
    deserialize,
    deserialize_json,
    edge_index,
    serialize,
    serialize_json,
    star_partition,
    total_edges,
)
from .verify import (
    check_necessary,
    class_sizes,
    find_gallai_partition,
    is_gallai,
    is_special_coloring,
    rainbow_witness,
    star_partition_of,
    top_l_cover,
    validate_gallai_partition,
)
from .construct import (
    NotConstructed,
    construct_any,
    construct_balanced,
    construct_division,
    construct_gk_general,
    construct_k3_base,
    construct_k4_base,
    extend_by_star,
    lower_bound_witness,
    merge_classes,
    peel_reduction,
    replay_peel,
    special_coloring,
    star_partition_for,
)
from .oracle import EnumerationResult, compute_g, enumerate_realizable, search_realizable
from .generator import random_gallai

__all__ = [
    "BalancedParams",
    "BudgetExceeded",
    "Coloring",
    "Distribution",
    "DivisionParams",
    "EnumerationResult",
    "GallaiError",
    "GallaiPartition",
    "InternalScheduleError",
    "InvariantViolation",
    "NonPositiveEntry",
    "NotConstructed",
    "NotFound",
    "NotGallai",
    "ParseError",
    "PeelImpossible",
    "PreconditionViolated",
    "StarPartition",
    "SumMismatch",
    "TooManyColors",
    "Verdict",
    "balanced_sizes",
    "canonicalize",
    "check_necessary",
    "class_sizes",
    "compute_g",
    "construct_any",
    "construct_balanced",
    "construct_division",
    "construct_gk_general",
    "construct_k3_base",
    "construct_k4_base",
    "deserialize",
    "deserialize_json",
    "edge_index",
    "enumerate_realizable",
    "extend_by_star",
    "find_gallai_partition",
    "is_gallai",
    "is_special_coloring",
    "lower_bound_witness",
    "merge_classes",
    "peel_reduction",
    "rainbow_witness",
    "random_gallai",
    "replay_peel",
    "search_realizable",
    "serialize",
    "serialize_json",
    "special_coloring",
    "star_partition",
    "star_partition_for",
    "star_partition_of",
    "top_l_cover",
    "total_edges",
    "validate_gallai_partition",
]
