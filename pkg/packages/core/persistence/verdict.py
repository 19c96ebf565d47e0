from __future__ import annotations
from typing import Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from packages.core.config import DEFAULT_TOLERANCES, get_logger
from packages.core.utils.serde import ExtReal

logger = get_logger(__name__)

Persists = Literal["yes", "no", "critical-indeterminate"]
DiagnosticValue = Union[bool, int, ExtReal, str]


class PersistenceVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    criterion_value: ExtReal
    persists: Persists
    route: str
    diagnostics: Dict[str, DiagnosticValue] = Field(default_factory=dict)


def classify(value: float, band: float = DEFAULT_TOLERANCES.boundary) -> Persists:
    """Compare a criterion value with 1; values within `band` of 1 are left undecided."""
    if value > 1.0 + band:
        return "yes"
    if value < 1.0 - band:
        return "no"
    return "critical-indeterminate"


def make_verdict(
    value: float,
    route: str,
    diagnostics: Optional[Dict[str, DiagnosticValue]] = None,
    band: float = DEFAULT_TOLERANCES.boundary,
    indeterminate: bool = False,
) -> PersistenceVerdict:
    persists: Persists = "critical-indeterminate" if indeterminate else classify(value, band)
    if persists == "critical-indeterminate":
        logger.warning("%s: criterion value %.15g is on the persistence boundary", route, value)
    return PersistenceVerdict(
        criterion_value=value, persists=persists, route=route, diagnostics=diagnostics or {}
    )
