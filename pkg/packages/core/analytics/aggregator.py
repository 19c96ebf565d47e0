from __future__ import annotations
from collections import Counter
from typing import Sequence
import math

import numpy as np

from packages.core.schemas import SimulationSummary
from packages.core.simulate.branching import SimOutcome


def _mean_stderr(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    arr = np.asarray(values)
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), stderr


def summarize_outcomes(outcomes: Sequence[SimOutcome]) -> SimulationSummary:
    """Survival, extinction times and realized growth over a batch of replicates.

    window_growth is (log|Z_n| - log|Z_h|) / (n - h) with h = ceil(n/2); it drops
    the start-up term log W that biases (1/n) log|Z_n| at moderate n.
    """
    survivors = [o for o in outcomes if not o.extinct]
    extinctions = Counter(o.extinction_generation for o in outcomes if o.extinct)
    whole, window = [], []
    for o in survivors:
        n = o.generations
        if n == 0:
            continue
        whole.append(math.log(o.final_size) / n)
        half = math.ceil(n / 2)
        if n - half > 0:
            window.append((math.log(o.final_size) - math.log(sum(o.sizes[half]))) / (n - half))
    mean_log, mean_log_se = _mean_stderr(whole)
    win, win_se = _mean_stderr(window)
    return SimulationSummary(
        replicates=len(outcomes),
        survivors=len(survivors),
        survival_frequency=len(survivors) / len(outcomes) if outcomes else 0.0,
        truncated=sum(1 for o in outcomes if o.truncated),
        extinction_histogram=dict(sorted(extinctions.items())),
        mean_log_growth=mean_log,
        mean_log_growth_stderr=mean_log_se,
        window_growth=win,
        window_growth_stderr=win_se,
    )
