from __future__ import annotations
import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from packages.core.config import get_logger
from packages.core.errors import DivergentSeriesError

logger = get_logger(__name__)


def solve_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """LU with partial pivoting plus one step of iterative refinement."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return np.zeros_like(b)
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            factors = lu_factor(a)
        except (LinAlgWarning, ValueError) as exc:
            raise DivergentSeriesError(f"singular system: {exc}") from exc
    x = lu_solve(factors, b)
    x = x + lu_solve(factors, b - a @ x)
    if not np.all(np.isfinite(x)):
        raise DivergentSeriesError("linear solve produced non-finite values")
    logger.debug("dense solve residual %.3e", float(np.max(np.abs(a @ x - b))))
    return x
