from packages.core.disperser.walk import (
    HittingWeights,
    StationaryDistribution,
    TabooReturn,
    depleting_rate,
    hitting_weights,
    mean_sink_sojourn,
    stationary,
    taboo_return,
    weighted_return_value,
)
from packages.core.disperser.pipeline import (
    pipeline_depleting_rate,
    pipeline_depleting_rate_limit,
    pipeline_roots,
    two_patch_depleting_rate,
)

__all__ = [
    "HittingWeights",
    "StationaryDistribution",
    "TabooReturn",
    "depleting_rate",
    "hitting_weights",
    "mean_sink_sojourn",
    "stationary",
    "taboo_return",
    "weighted_return_value",
    "pipeline_depleting_rate",
    "pipeline_depleting_rate_limit",
    "pipeline_roots",
    "two_patch_depleting_rate",
]
