"""
Environment models: constant, two-season periodic, and two-state Markov.

States are numbered 0 (e1) and 1 (e2). `means` holds one habitat -> mean map
per state; a constant environment may leave it empty, in which case the
graph's own means are used.
"""
from __future__ import annotations
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from packages.core.errors import DocumentError, InvalidEnvironmentError
from packages.core.model.documents import load_json
from packages.core.model.patchgraph import PatchGraph

EnvKind = Literal["constant", "periodic", "markov"]
StartState = Literal["stationary", "e1", "e2"]


class EnvironmentModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: EnvKind
    means: List[Dict[int, float]] = []
    alpha: Optional[float] = None
    beta: Optional[float] = None
    start: StartState = "stationary"

    @model_validator(mode="after")
    def _check(self) -> "EnvironmentModel":
        if self.kind == "constant":
            if len(self.means) > 1:
                raise ValueError("a constant environment has at most one mean map")
            if self.alpha is not None or self.beta is not None:
                raise ValueError("alpha/beta only apply to a markov environment")
        else:
            if len(self.means) != 2:
                raise ValueError(f"a {self.kind} environment needs exactly 2 mean maps")
        if self.kind == "markov":
            for name, value in (("alpha", self.alpha), ("beta", self.beta)):
                if value is None or not 0.0 < value <= 1.0:
                    raise ValueError(f"{name} must lie in (0, 1], got {value}")
        elif self.kind == "periodic" and (self.alpha is not None or self.beta is not None):
            raise ValueError("alpha/beta only apply to a markov environment")
        for state in self.means:
            if any(v < 0.0 for v in state.values()):
                raise ValueError("mean offspring must be nonnegative")
        return self

    @classmethod
    def constant(cls, means: Optional[Dict[int, float]] = None) -> "EnvironmentModel":
        return cls(kind="constant", means=[means] if means is not None else [])

    @classmethod
    def periodic(cls, e1: Dict[int, float], e2: Dict[int, float]) -> "EnvironmentModel":
        return cls(kind="periodic", means=[e1, e2])

    @classmethod
    def markov(
        cls, alpha: float, beta: float, e1: Dict[int, float], e2: Dict[int, float]
    ) -> "EnvironmentModel":
        return cls(kind="markov", alpha=alpha, beta=beta, means=[e1, e2])

    @classmethod
    def iid(cls, nu: float, e1: Dict[int, float], e2: Dict[int, float]) -> "EnvironmentModel":
        """Independent draws, state e1 with probability nu: alpha = 1 - nu, beta = nu."""
        if not 0.0 < nu < 1.0:
            raise InvalidEnvironmentError(f"nu must lie in (0, 1), got {nu}")
        return cls.markov(1.0 - nu, nu, e1, e2)

    @property
    def num_states(self) -> int:
        return max(len(self.means), 1)

    @property
    def nu(self) -> float:
        """Stationary probability of e1."""
        if self.kind == "markov":
            assert self.alpha is not None and self.beta is not None
            return self.beta / (self.alpha + self.beta)
        if self.kind == "periodic":
            return 0.5
        return 1.0

    def transition_matrix(self) -> np.ndarray:
        if self.kind == "markov":
            a, b = self.alpha, self.beta
            return np.array([[1.0 - a, a], [b, 1.0 - b]])
        if self.kind == "periodic":
            return np.array([[0.0, 1.0], [1.0, 0.0]])
        return np.ones((1, 1))

    def initial_law(self) -> np.ndarray:
        if self.kind == "constant":
            return np.ones(1)
        if self.start == "e2":
            return np.array([0.0, 1.0])
        if self.start == "e1" or self.kind == "periodic":
            return np.array([1.0, 0.0])
        return np.array([self.nu, 1.0 - self.nu])

    def state_means(self, graph: PatchGraph, state: int) -> np.ndarray:
        """Per-patch means m_i(w) in state `state`."""
        if not 0 <= state < self.num_states:
            raise InvalidEnvironmentError(
                f"state index {state} out of range for {self.num_states} state(s)"
            )
        if not self.means:
            return graph.means
        table = self.means[state]
        missing = sorted(set(graph.habitat_of) - set(table))
        if missing:
            raise InvalidEnvironmentError(f"state e{state + 1} gives no mean for habitat(s) {missing}")
        return graph.patch_means(table)


def environment_from_document(data: Any) -> EnvironmentModel:
    if not isinstance(data, dict):
        raise DocumentError("environment document must be a JSON object")
    try:
        return EnvironmentModel.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ()))
        raise DocumentError(f"invalid environment document: {where}: {first.get('msg')}") from e


def load_environment(path: str | Path) -> EnvironmentModel:
    return environment_from_document(load_json(path))


def environment_document(env: EnvironmentModel) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "kind": env.kind,
        "means": [{str(k): v for k, v in sorted(state.items())} for state in env.means],
    }
    if env.kind == "markov":
        doc.update(alpha=env.alpha, beta=env.beta, start=env.start)
    return doc
