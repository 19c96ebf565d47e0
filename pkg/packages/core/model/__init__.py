from packages.core.model.patchgraph import (
    MeanOffspringMatrix,
    PatchGraph,
    ValidationReport,
    Violation,
    is_primitive,
    mean_matrix,
    reference_source,
    require_valid,
    validate,
)
from packages.core.model.builders import (
    build_chessboard,
    build_cycle_pipeline,
    build_motif,
    build_periodic_array,
    build_star,
    build_two_patch,
    lump,
)

__all__ = [
    "MeanOffspringMatrix",
    "PatchGraph",
    "ValidationReport",
    "Violation",
    "is_primitive",
    "mean_matrix",
    "reference_source",
    "require_valid",
    "validate",
    "build_chessboard",
    "build_cycle_pipeline",
    "build_motif",
    "build_periodic_array",
    "build_star",
    "build_two_patch",
    "lump",
]
