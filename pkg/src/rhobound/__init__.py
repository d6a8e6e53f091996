"""Spectral-radius-preserving matrix expansions, contractions, and certified bounds.

The toolkit builds larger nonnegative matrices with the same spectral radius
(row/column sum expansions), collapses matrices to smaller ones whose radii
bound the original from below or above (block contractions), and searches the
space of contractions for the best certified enclosure of rho(M) as well as
cross-matrix comparison certificates rho(A) <= rho(B).
"""

from .contraction import ContractionSpec, adjust, contract
from .errors import (
    DimensionMismatch,
    EnclosureDisagreement,
    IndexOutOfRange,
    InvalidSize,
    MatrixParseError,
    NegativeEntry,
    NonFinite,
    NonSquare,
    NotEquitable,
    NotTwoByTwo,
    PartitionSpaceTooLarge,
    SequenceError,
    ToolkitError,
)
from .expansion import (
    ColumnSumExpandStep,
    EquitableExpandStep,
    ExpansionPlan,
    FillPolicy,
    MixedExpandStep,
    PermuteStep,
    RowSumExpandStep,
    SequenceResult,
    TransposeStep,
    UNIFORM,
    apply_sequence,
    column_sum_expand,
    equitable_expand,
    explicit_fill,
    induced_partition,
    mixed_expand,
    row_sum_expand,
    seeded_fill,
)
from .fileio import format_matrix, parse_matrix_text, read_matrix, write_matrix
from .matrix import (
    IndexPartition,
    Matrix,
    Permutation,
    block_row_sums,
    componentwise_le,
    is_equitable,
    permute_symmetric,
    quotient,
    transpose,
    validate,
)
from .search import (
    BoundsReport,
    ComparisonCertificate,
    ContractionTrail,
    SearchOptions,
    TrailStep,
    bounds_search,
    compare,
    count_partitions,
    enumerate_partitions,
    replay_trail,
    row_sum_bounds,
    two_by_two_bounds,
)
from .spectral import RhoEstimate, rho, rho_gelfand, rho_power

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "ColumnSumExpandStep",
    "ComparisonCertificate",
    "ContractionSpec",
    "ContractionTrail",
    "DimensionMismatch",
    "EnclosureDisagreement",
    "EquitableExpandStep",
    "ExpansionPlan",
    "FillPolicy",
    "IndexOutOfRange",
    "IndexPartition",
    "InvalidSize",
    "Matrix",
    "MatrixParseError",
    "MixedExpandStep",
    "NegativeEntry",
    "NonFinite",
    "NonSquare",
    "NotEquitable",
    "NotTwoByTwo",
    "PartitionSpaceTooLarge",
    "PermuteStep",
    "Permutation",
    "RhoEstimate",
    "RowSumExpandStep",
    "SearchOptions",
    "SequenceError",
    "SequenceResult",
    "ToolkitError",
    "TrailStep",
    "TransposeStep",
    "UNIFORM",
    "adjust",
    "apply_sequence",
    "block_row_sums",
    "bounds_search",
    "column_sum_expand",
    "compare",
    "componentwise_le",
    "contract",
    "count_partitions",
    "enumerate_partitions",
    "equitable_expand",
    "explicit_fill",
    "format_matrix",
    "induced_partition",
    "is_equitable",
    "mixed_expand",
    "parse_matrix_text",
    "permute_symmetric",
    "quotient",
    "read_matrix",
    "replay_trail",
    "rho",
    "rho_gelfand",
    "rho_power",
    "row_sum_bounds",
    "row_sum_expand",
    "seeded_fill",
    "transpose",
    "two_by_two_bounds",
    "validate",
    "write_matrix",
]
