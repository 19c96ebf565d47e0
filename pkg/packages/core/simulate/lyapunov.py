"""
Monte Carlo estimate of the growth exponent

    gamma = lim (1/n) log || A(w_0) A(w_1) ... A(w_{n-1}) ||

for a random environment sequence w, with ||.|| the maximum row sum. The
running product is renormalized at every step, so log ||product|| is the sum
of the logged normalizers s_t; the estimate is their mean after a burn-in of
horizon/10 steps.
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Optional
import math

import numpy as np

from packages.core.config import get_logger
from packages.core.environment.matrices import env_mean_array
from packages.core.environment.model import EnvironmentModel
from packages.core.errors import DegenerateParameterError
from packages.core.model.patchgraph import PatchGraph, require_valid
from packages.core.simulate.rng import environment_states, run_replicates

logger = get_logger(__name__)

MIN_HORIZON = 1000


@dataclass(frozen=True)
class LyapunovEstimate:
    gamma: float
    stderr: float
    per_replicate: np.ndarray


def _one_exponent(matrices: list[np.ndarray], states: np.ndarray) -> float:
    k = matrices[0].shape[0]
    product = np.eye(k)
    burn = states.shape[0] // 10
    logs = []
    for t, w in enumerate(states):
        product = product @ matrices[w]
        scale = float(product.sum(axis=1).max())
        if scale <= 0.0:
            return -math.inf
        product /= scale
        if t >= burn:
            logs.append(math.log(scale))
    return float(np.mean(logs))


def estimate_lyapunov(
    graph: PatchGraph,
    env: EnvironmentModel,
    horizon: int = 10_000,
    replicates: int = 20,
    seed: int = 0,
    threads: Optional[int] = None,
) -> LyapunovEstimate:
    require_valid(graph)
    if horizon < MIN_HORIZON:
        raise DegenerateParameterError(f"horizon must be at least {MIN_HORIZON}, got {horizon}")
    if replicates < 1:
        raise DegenerateParameterError("need at least one replicate")
    matrices = [env_mean_array(graph, env, w) for w in range(env.num_states)]
    per_replicate = np.array(
        run_replicates(
            lambda r: _one_exponent(matrices, environment_states(env, horizon, seed, r, stream="lyapunov")),
            replicates,
            threads,
        )
    )
    gamma = float(per_replicate.mean())
    stderr = float(per_replicate.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    logger.debug("lyapunov estimate %.6g +- %.2g over %d replicates", gamma, stderr, replicates)
    return LyapunovEstimate(gamma=gamma, stderr=stderr, per_replicate=per_replicate)
