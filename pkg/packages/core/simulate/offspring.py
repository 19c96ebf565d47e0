from __future__ import annotations
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

OffspringFamily = Literal["poisson", "geometric", "bernoulli_pair"]


class OffspringLaw(BaseModel):
    """Offspring distribution family; its mean is the habitat mean in force.

    geometric lives on {0, 1, ...} with success probability 1/(1+m);
    bernoulli_pair is the two-point law on {floor(m), floor(m)+1} with mean m.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: OffspringFamily = "poisson"

    def draw(self, rng: np.random.Generator, mean: float, size: int) -> np.ndarray:
        """Offspring numbers of `size` individuals."""
        if self.family == "poisson":
            return rng.poisson(mean, size)
        if self.family == "geometric":
            return rng.geometric(1.0 / (1.0 + mean), size) - 1
        base = np.floor(mean)
        return (base + rng.binomial(1, mean - base, size)).astype(np.int64)

    def total(self, rng: np.random.Generator, counts: np.ndarray, means: np.ndarray) -> np.ndarray:
        """Total offspring per patch of counts[i] parents with mean means[i]."""
        counts = np.asarray(counts, dtype=np.int64)
        if self.family == "poisson":
            return rng.poisson(counts * means)
        if self.family == "geometric":
            out = np.zeros_like(counts)
            live = counts > 0
            if live.any():
                out[live] = rng.negative_binomial(counts[live], 1.0 / (1.0 + means[live]))
            return out
        base = np.floor(means)
        return (counts * base.astype(np.int64) + rng.binomial(counts, means - base)).astype(np.int64)
