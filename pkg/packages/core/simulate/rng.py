"""
Random streams and the replicate worker pool.

Every replicate draws from its own Philox stream keyed by (stream tag,
replicate index) under the master seed, so outcomes do not depend on the
order in which replicates run or on the number of worker threads.
"""
from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Literal, Optional, TypeVar

import numpy as np

from packages.core.config import get_logger, get_settings
from packages.core.environment.model import EnvironmentModel

logger = get_logger(__name__)

T = TypeVar("T")
Stream = Literal["branching", "environment", "walk", "lyapunov"]

STREAM_TAGS = {"branching": 1, "environment": 2, "walk": 3, "lyapunov": 4}


def replicate_generator(seed: int, stream: Stream, replicate: int) -> np.random.Generator:
    key = np.random.SeedSequence(seed, spawn_key=(STREAM_TAGS[stream], replicate))
    return np.random.Generator(np.random.Philox(key))


def run_replicates(
    work: Callable[[int], T], replicates: int, threads: Optional[int] = None
) -> List[T]:
    """Run work(0..replicates-1) on a thread pool; results come back in replicate order."""
    workers = threads if threads and threads > 0 else get_settings().worker_count()
    workers = max(1, min(workers, replicates))
    logger.debug("running %d replicates on %d thread(s)", replicates, workers)
    if workers == 1:
        return [work(r) for r in range(replicates)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, range(replicates)))


def environment_states(
    env: EnvironmentModel, length: int, seed: int, replicate: int, stream: Stream = "environment"
) -> np.ndarray:
    """State of the environment at generations 0..length-1."""
    if env.kind == "constant":
        return np.zeros(length, dtype=np.int64)
    if env.kind == "periodic":
        first = int(np.argmax(env.initial_law()))
        return (np.arange(length, dtype=np.int64) + first) % 2
    rng = replicate_generator(seed, stream, replicate)
    transition = env.transition_matrix()
    states = np.empty(length, dtype=np.int64)
    if length == 0:
        return states
    draws = rng.random(length)
    states[0] = int(draws[0] >= env.initial_law()[0])
    for t in range(1, length):
        states[t] = int(draws[t] >= transition[states[t - 1], 0])
    return states
