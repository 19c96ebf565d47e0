from __future__ import annotations
from typing import Sequence

import numpy as np

_SUM_TOL = 1e-9


def as_frequency(values: Sequence[float] | np.ndarray, tol: float = _SUM_TOL) -> np.ndarray:
    """Check a point of the probability simplex and renormalize rounding noise away."""
    f = np.asarray(values, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("a frequency vector must be a non-empty 1-d sequence")
    if np.any(f < -tol):
        raise ValueError(f"frequency vector has negative entries: {f.tolist()}")
    total = float(f.sum())
    if abs(total - 1.0) > tol:
        raise ValueError(f"frequency vector sums to {total}, not 1")
    f = np.clip(f, 0.0, None)
    return f / f.sum()


def exponentiated_step(f: np.ndarray, gradient: np.ndarray, step: float) -> np.ndarray:
    """One mirror-ascent step on the simplex (entropic geometry).

    Zero coordinates stay zero, so the iterate never leaves the face it started on.
    """
    g = np.where(f > 0, gradient, 0.0)
    g = g - np.max(g[f > 0])
    y = f * np.exp(step * g)
    return y / y.sum()
