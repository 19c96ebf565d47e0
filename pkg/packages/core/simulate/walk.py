from __future__ import annotations
from bisect import bisect_right
from dataclasses import dataclass
from typing import Collection, List, Optional

import numpy as np

from packages.core.model.patchgraph import PatchGraph, reference_source, require_valid
from packages.core.simulate.rng import replicate_generator


@dataclass(frozen=True)
class DisperserPath:
    path: np.ndarray
    frequencies: np.ndarray


def sample_disperser_path(
    graph: PatchGraph, steps: int, seed: int, start: Optional[int] = None, replicate: int = 0
) -> DisperserPath:
    """X_0..X_steps of the dispersal chain; frequencies count X_0..X_{steps-1}."""
    require_valid(graph)
    rng = replicate_generator(seed, "walk", replicate)
    cumulative = [np.cumsum(row).tolist() for row in graph.D]
    last = graph.num_patches - 1
    here = reference_source(graph) if start is None else start
    path = np.empty(steps + 1, dtype=np.int64)
    path[0] = here
    for t, u in enumerate(rng.random(steps), start=1):
        here = min(bisect_right(cumulative[here], u), last)
        path[t] = here
    visits = np.bincount(path[:-1], minlength=graph.num_patches) if steps else np.zeros(graph.num_patches)
    total = max(steps, 1)
    return DisperserPath(path=path, frequencies=visits / total)


def path_sink_sojourns(path: np.ndarray, source_set: Collection[int]) -> List[int]:
    """Lengths S of the completed excursions outside the source set (source -> sinks -> source)."""
    inside = np.isin(path, list(source_set))
    sojourns: List[int] = []
    run: Optional[int] = None
    for flag in inside:
        if flag:
            if run:
                sojourns.append(run)
            run = 0
        elif run is not None:
            run += 1
    return sojourns


def return_times(path: np.ndarray, patch: int) -> np.ndarray:
    """Gaps between successive visits of `patch`."""
    return np.diff(np.flatnonzero(path == patch))
