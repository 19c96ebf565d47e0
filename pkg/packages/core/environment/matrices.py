from __future__ import annotations

import numpy as np

from packages.core.environment.model import EnvironmentModel
from packages.core.errors import InvalidEnvironmentError
from packages.core.model.patchgraph import MeanOffspringMatrix, PatchGraph, require_valid


def env_mean_array(graph: PatchGraph, env: EnvironmentModel, state: int) -> np.ndarray:
    return env.state_means(graph, state)[:, None] * graph.D


def env_mean_matrix(graph: PatchGraph, env: EnvironmentModel, state: int) -> MeanOffspringMatrix:
    """A(w)_ij = m_i(w) d_ij."""
    require_valid(graph)
    return MeanOffspringMatrix.from_array(env_mean_array(graph, env, state))


def two_step_array(graph: PatchGraph, env: EnvironmentModel) -> np.ndarray:
    if env.kind != "periodic":
        raise InvalidEnvironmentError(f"two-step matrix needs a periodic environment, got {env.kind}")
    return env_mean_array(graph, env, 0) @ env_mean_array(graph, env, 1)


def two_step_mean_matrix(graph: PatchGraph, env: EnvironmentModel) -> MeanOffspringMatrix:
    """a_ij = sum_k m_i(e1) d_ik m_k(e2) d_kj, the mean matrix of (Z_2n)."""
    require_valid(graph)
    return MeanOffspringMatrix.from_array(two_step_array(graph, env))
