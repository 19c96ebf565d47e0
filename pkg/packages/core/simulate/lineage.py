from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from packages.core.errors import AllExtinctError
from packages.core.simulate.branching import SimOutcome


@dataclass(frozen=True)
class LineageEstimate:
    frequency: np.ndarray
    radius: np.ndarray
    survivors: int
    per_replicate: np.ndarray


def lineage_frequencies(outcomes: Sequence[SimOutcome]) -> np.ndarray:
    """One row per surviving replicate: occupancy frequencies of its sampled ancestral line."""
    rows = [
        np.asarray(o.lineage_counts, dtype=float) / sum(o.lineage_counts)
        for o in outcomes
        if o.lineage_counts is not None and sum(o.lineage_counts) > 0
    ]
    return np.vstack(rows) if rows else np.empty((0, 0))


def estimate_lineage_frequency(
    outcomes: Sequence[SimOutcome], confidence: float = 0.95
) -> LineageEstimate:
    """Mean ancestral occupancy over survivors, with a normal-approximation radius."""
    freqs = lineage_frequencies(outcomes)
    n = freqs.shape[0]
    if n == 0:
        raise AllExtinctError("no surviving replicate to estimate lineage occupancy from")
    mean = freqs.mean(axis=0)
    if n > 1:
        z = float(norm.ppf(0.5 + confidence / 2.0))
        radius = z * freqs.std(axis=0, ddof=1) / np.sqrt(n)
    else:
        radius = np.zeros_like(mean)
    return LineageEstimate(frequency=mean, radius=radius, survivors=n, per_replicate=freqs)
