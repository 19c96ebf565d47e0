from __future__ import annotations
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from packages.core.persistence.verdict import PersistenceVerdict
from packages.core.simulate.offspring import OffspringLaw
from packages.core.utils.serde import ExtReal

CheckStatus = Literal["pass", "fail", "indeterminate"]


class CrossCheck(BaseModel):
    name: str
    left_route: str
    right_route: str
    left: ExtReal
    right: ExtReal
    delta: ExtReal
    tolerance: float
    status: CheckStatus


class RouteError(BaseModel):
    route: str
    error_type: str
    message: str


class AnalysisOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: Optional[int] = None  # 0-based reference source override
    simulate: bool = False
    seed: Optional[int] = None
    generations: int = 100
    replicates: int = 200
    law: OffspringLaw = Field(default_factory=OffspringLaw)
    population_cap: Optional[int] = None
    lyapunov_horizon: int = 10_000
    lyapunov_replicates: int = 20
    threads: Optional[int] = None


class SimulationSummary(BaseModel):
    replicates: int
    survivors: int
    survival_frequency: float
    truncated: int
    extinction_histogram: Dict[int, int] = Field(default_factory=dict)
    mean_log_growth: Optional[ExtReal] = None
    mean_log_growth_stderr: Optional[float] = None
    window_growth: Optional[ExtReal] = None
    window_growth_stderr: Optional[float] = None


class AnalysisReport(BaseModel):
    model: Dict[str, Any]
    environment: Dict[str, Any]
    model_digest: str
    verdicts: List[PersistenceVerdict] = Field(default_factory=list)
    rho_spectral: Optional[ExtReal] = None
    rho_variational: Optional[ExtReal] = None
    rho_simulated: Optional[ExtReal] = None
    phi_spectral: Optional[List[float]] = None
    phi_variational: Optional[List[float]] = None
    phi_lineage: Optional[List[float]] = None
    phi_simulated: Optional[List[float]] = None
    phi_simulated_radius: Optional[List[float]] = None
    depleting_rate: Optional[float] = None
    depleting_rate_closed_form: Optional[float] = None
    mean_sink_sojourn: Optional[float] = None
    markov_lower_bound: Optional[ExtReal] = None
    gamma_hat: Optional[ExtReal] = None
    gamma_stderr: Optional[float] = None
    isolated_growth: Optional[List[float]] = None
    survival_in_sinks_only: Optional[bool] = None
    simulation: Optional[SimulationSummary] = None
    cross_checks: List[CrossCheck] = Field(default_factory=list)
    errors: List[RouteError] = Field(default_factory=list)

    def failed_checks(self) -> List[CrossCheck]:
        return [c for c in self.cross_checks if c.status == "fail"]

    @property
    def all_pass(self) -> bool:
        return not self.failed_checks()
