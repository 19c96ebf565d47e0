"""
Multitype branching process with dispersal.

Each generation every individual reproduces with the mean of its patch in the
current environment state, then every child independently moves to patch j
with probability d_ij. Only aggregate counts are kept: Z_t per patch and the
parent-patch -> child-patch counts of every generation.

The ancestral line of a uniformly chosen survivor at the last generation is
drawn backwards from those counts: its patch is drawn proportionally to Z_n,
and its parent's patch proportionally to the transitions into the current
patch. Offspring numbers do not depend on ancestry, so this has the law of a
lineage tracked forward individual by individual.
"""
from __future__ import annotations
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from packages.core.config import get_logger, get_settings
from packages.core.environment.model import EnvironmentModel
from packages.core.errors import DegenerateParameterError
from packages.core.model.patchgraph import PatchGraph, reference_source, require_valid
from packages.core.simulate.offspring import OffspringLaw
from packages.core.simulate.rng import environment_states, replicate_generator, run_replicates

logger = get_logger(__name__)


class SimOutcome(BaseModel):
    replicate: int
    extinct: bool
    extinction_generation: Optional[int] = None
    truncated: bool = False
    generations: int
    sizes: List[List[int]]
    lineage_counts: Optional[List[int]] = None
    normalized_size: List[float] = Field(default_factory=list)
    env_states: List[int] = Field(default_factory=list)

    @property
    def final_size(self) -> int:
        return int(sum(self.sizes[-1]))

    @property
    def survived(self) -> bool:
        return not self.extinct


def _initial_counts(graph: PatchGraph, initial: Optional[Sequence[int]], start: Optional[int]) -> np.ndarray:
    if initial is not None:
        z0 = np.asarray(initial, dtype=np.int64)
        if z0.shape != (graph.num_patches,) or np.any(z0 < 0) or z0.sum() == 0:
            raise DegenerateParameterError("initial population must be a nonzero count per patch")
        return z0
    z0 = np.zeros(graph.num_patches, dtype=np.int64)
    z0[reference_source(graph) if start is None else start] = 1
    return z0


def sample_lineage(
    rng: np.random.Generator, final: np.ndarray, transitions: Sequence[np.ndarray]
) -> np.ndarray:
    """Patch visit counts of the ancestors (generations 0..n-1) of a uniform survivor."""
    k = final.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    patch = int(rng.choice(k, p=final / final.sum()))
    for step in reversed(transitions):
        into = step[:, patch].astype(float)
        patch = int(rng.choice(k, p=into / into.sum()))
        counts[patch] += 1
    return counts


def _run_one(
    replicate: int,
    graph: PatchGraph,
    env: EnvironmentModel,
    law: OffspringLaw,
    generations: int,
    seed: int,
    z0: np.ndarray,
    cap: int,
    rho: Optional[float],
) -> SimOutcome:
    rng = replicate_generator(seed, "branching", replicate)
    states = environment_states(env, generations, seed, replicate)
    state_means = [env.state_means(graph, w) for w in range(env.num_states)]
    d = graph.D
    k = graph.num_patches

    z = z0.copy()
    sizes = [z.tolist()]
    transitions: List[np.ndarray] = []
    extinct_at: Optional[int] = None
    truncated = False
    for t in range(generations):
        births = law.total(rng, z, state_means[states[t]])
        step = np.zeros((k, k), dtype=np.int64)
        for i in np.flatnonzero(births):
            step[i] = rng.multinomial(births[i], d[i])
        transitions.append(step)
        z = step.sum(axis=0)
        sizes.append(z.tolist())
        total = int(z.sum())
        if total == 0:
            extinct_at = t + 1
            break
        if total > cap:
            truncated = True
            logger.warning(
                "replicate %d truncated at generation %d (population %d > cap %d)",
                replicate, t + 1, total, cap,
            )
            break

    lineage = None
    if extinct_at is None and transitions:
        lineage = sample_lineage(rng, z, transitions).tolist()
    normalized = []
    if rho is not None and rho > 0:
        normalized = [float(sum(s)) / rho**n for n, s in enumerate(sizes)]
    return SimOutcome(
        replicate=replicate,
        extinct=extinct_at is not None,
        extinction_generation=extinct_at,
        truncated=truncated,
        generations=len(sizes) - 1,
        sizes=sizes,
        lineage_counts=lineage,
        normalized_size=normalized,
        env_states=states[: len(sizes) - 1].tolist(),
    )


def simulate_branching(
    graph: PatchGraph,
    env: Optional[EnvironmentModel] = None,
    law: Optional[OffspringLaw] = None,
    generations: int = 100,
    replicates: int = 100,
    seed: int = 0,
    initial: Optional[Sequence[int]] = None,
    start: Optional[int] = None,
    population_cap: Optional[int] = None,
    threads: Optional[int] = None,
    rho: Optional[float] = None,
) -> List[SimOutcome]:
    """Replicates of the branching process; one individual in the reference source by default.

    `rho`, when given, is used for the normalized sizes Z_n / rho^n.
    """
    require_valid(graph)
    if generations < 0 or replicates < 1:
        raise DegenerateParameterError("need generations >= 0 and replicates >= 1")
    env = env or EnvironmentModel.constant()
    law = law or OffspringLaw()
    cap = population_cap if population_cap is not None else get_settings().population_cap
    z0 = _initial_counts(graph, initial, start)
    return run_replicates(
        lambda r: _run_one(r, graph, env, law, generations, seed, z0, cap, rho),
        replicates,
        threads,
    )
