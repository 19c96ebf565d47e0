"""
Patch graph: habitat label per patch, row-stochastic dispersal, mean offspring
per habitat label. The mean offspring matrix A = (m_{j(i)} d_ij) is derived.

Graphs are immutable. Construction only checks shapes; the standing
assumptions of the model (stochastic rows, primitive dispersal, nonnegative
means) are checked by `validate`, so deliberately broken graphs can still be
built and reported on.
"""
from __future__ import annotations
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from packages.core.errors import InvalidGraphError

ROW_SUM_TOL = 1e-12

ViolationCode = Literal[
    "row_stochastic",
    "probability_range",
    "primitive",
    "mean_negative",
    "habitat_unused",
]


class PatchGraph(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_patches: int = Field(gt=0)
    habitat_of: Tuple[int, ...]
    dispersal: Tuple[Tuple[float, ...], ...]
    mean_offspring: Dict[int, float]

    @model_validator(mode="after")
    def _check_shapes(self) -> "PatchGraph":
        k = self.num_patches
        if len(self.habitat_of) != k:
            raise ValueError(f"habitat_of has {len(self.habitat_of)} entries for {k} patches")
        if len(self.dispersal) != k or any(len(row) != k for row in self.dispersal):
            raise ValueError(f"dispersal must be a {k}x{k} matrix")
        missing = sorted(set(self.habitat_of) - set(self.mean_offspring))
        if missing:
            raise ValueError(f"no mean offspring given for habitat(s) {missing}")
        return self

    @classmethod
    def from_arrays(
        cls,
        habitat_of: Sequence[int],
        dispersal: np.ndarray | Sequence[Sequence[float]],
        mean_offspring: Dict[int, float],
    ) -> "PatchGraph":
        d = np.asarray(dispersal, dtype=float)
        return cls(
            num_patches=len(habitat_of),
            habitat_of=tuple(int(h) for h in habitat_of),
            dispersal=tuple(tuple(float(x) for x in row) for row in d),
            mean_offspring={int(k): float(v) for k, v in mean_offspring.items()},
        )

    @property
    def D(self) -> np.ndarray:
        return np.array(self.dispersal, dtype=float)

    @property
    def means(self) -> np.ndarray:
        """Per-patch mean offspring m_{j(i)}."""
        return np.array([self.mean_offspring[h] for h in self.habitat_of], dtype=float)

    def patch_means(self, mean_offspring: Dict[int, float]) -> np.ndarray:
        """Per-patch means under another habitat → mean map (e.g. an environment state)."""
        return np.array([mean_offspring[h] for h in self.habitat_of], dtype=float)

    def with_means(self, mean_offspring: Dict[int, float]) -> "PatchGraph":
        return self.model_copy(update={"mean_offspring": dict(mean_offspring)})

    def patches_of(self, habitat: int) -> List[int]:
        return [i for i, h in enumerate(self.habitat_of) if h == habitat]


class MeanOffspringMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[float, ...], ...]

    @classmethod
    def from_array(cls, a: np.ndarray) -> "MeanOffspringMatrix":
        return cls(entries=tuple(tuple(float(x) for x in row) for row in np.asarray(a)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)


class Violation(BaseModel):
    code: ViolationCode
    message: str


class ValidationReport(BaseModel):
    violations: List[Violation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]


def _bool_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return ((a @ b) > 0).astype(np.int64)


def is_primitive(matrix: np.ndarray) -> bool:
    """Boolean powering to the Wielandt bound (K-1)^2 + 1: primitive iff that power is positive."""
    pattern = (np.asarray(matrix) > 0).astype(np.int64)
    exponent = (pattern.shape[0] - 1) ** 2 + 1
    result = np.eye(pattern.shape[0], dtype=np.int64)
    base = pattern
    while exponent:
        if exponent & 1:
            result = _bool_product(result, base)
        exponent >>= 1
        if exponent:
            base = _bool_product(base, base)
    return bool(result.all())


def validate(graph: PatchGraph) -> ValidationReport:
    report = ValidationReport()
    d = graph.D
    if np.any(d < 0.0) or np.any(d > 1.0):
        report.violations.append(
            Violation(code="probability_range", message="dispersal entries must lie in [0, 1]")
        )
    sums = d.sum(axis=1)
    bad_rows = [i + 1 for i, s in enumerate(sums) if abs(s - 1.0) > ROW_SUM_TOL]
    if bad_rows:
        report.violations.append(
            Violation(code="row_stochastic", message=f"dispersal rows {bad_rows} do not sum to 1")
        )
    if not is_primitive(d):
        report.violations.append(
            Violation(
                code="primitive",
                message="dispersal chain is not primitive (reducible or periodic)",
            )
        )
    negative = sorted(h for h, m in graph.mean_offspring.items() if m < 0.0)
    if negative:
        report.violations.append(
            Violation(code="mean_negative", message=f"negative mean offspring for habitat(s) {negative}")
        )
    if not set(graph.habitat_of) & set(graph.mean_offspring):
        report.violations.append(
            Violation(code="habitat_unused", message="no habitat type is assigned to any patch")
        )
    return report


def require_valid(graph: PatchGraph) -> None:
    report = validate(graph)
    if not report.valid:
        details = "; ".join(v.message for v in report.violations)
        raise InvalidGraphError(f"invalid patch graph: {details}", report=report)


def mean_matrix(graph: PatchGraph) -> MeanOffspringMatrix:
    require_valid(graph)
    return MeanOffspringMatrix.from_array(graph.means[:, None] * graph.D)


def reference_source(graph: PatchGraph, means: Optional[np.ndarray] = None) -> int:
    """First patch whose mean offspring is maximal (0-based)."""
    m = graph.means if means is None else np.asarray(means, dtype=float)
    return int(np.argmax(m))
