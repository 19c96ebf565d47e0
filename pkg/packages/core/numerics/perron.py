"""
Power iteration for the Perron root of nonnegative matrices.

Vectors are kept on the unit simplex (l1-normalized, nonnegative), so the
iteration never changes sign and the dominant eigenvector comes out positive
for primitive matrices. Convergence is declared once both the Rayleigh
quotient and the vector have settled; when the budget runs out we fall back to a dense eigen-decomposition and log
it, so callers always get an answer together with the iteration diagnostics.
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Literal

import numpy as np

from packages.core.config import DEFAULT_TOLERANCES, get_logger

logger = get_logger(__name__)

Side = Literal["right", "left"]
_VECTOR_TOL = 1e-12
# spectral_radius switches from dense eigvals to power iteration above this size
_DENSE_LIMIT = 400


@dataclass(frozen=True)
class PerronPair:
    root: float
    vector: np.ndarray
    iterations: int
    converged: bool
    residual: float


def _dense_fallback(a: np.ndarray) -> tuple[float, np.ndarray]:
    values, vectors = np.linalg.eig(a)
    idx = int(np.argmax(values.real))
    vec = np.abs(vectors[:, idx].real)
    total = vec.sum()
    return float(values[idx].real), vec / total if total > 0 else vec


def perron_pair(
    matrix: np.ndarray,
    side: Side = "right",
    tol: float = DEFAULT_TOLERANCES.perron_tol,
    max_iter: int = DEFAULT_TOLERANCES.perron_max_iter,
    shift: bool = False,
) -> PerronPair:
    """
    Dominant eigenpair of a nonnegative square matrix.

    side="right" solves A x = rho x, side="left" solves x A = rho x.
    shift=True iterates on A + c I (c = half the max row sum) which removes
    periodicity; use it for matrices that are irreducible but not primitive,
    or reducible blocks such as taboo sub-matrices.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if side == "left":
        a = a.T
    n = a.shape[0]
    if n == 0:
        return PerronPair(0.0, np.zeros(0), 0, True, 0.0)
    if not np.any(a):
        return PerronPair(0.0, np.full(n, 1.0 / n), 0, True, 0.0)

    c = 0.5 * float(np.max(a.sum(axis=1))) if shift else 0.0
    b = a + c * np.eye(n) if c > 0 else a

    x = np.full(n, 1.0 / n)
    lam_prev = np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = b @ x
        total = y.sum()
        if total <= 0.0:
            # x fell into the kernel (sterile rows); restart from a positive vector
            x = np.full(n, 1.0 / n) + np.arange(n) / (10.0 * n * n)
            x /= x.sum()
            continue
        lam = float(x @ y) / float(x @ x)
        x_next = y / total
        step = float(np.abs(x_next - x).sum())
        x = x_next
        # eigenvalue and eigenvector both settled
        if abs(lam - lam_prev) <= tol * max(abs(lam), 1e-300) and step <= _VECTOR_TOL:
            converged = True
            break
        lam_prev = lam

    root = float((b @ x).sum() / x.sum()) - c
    residual = float(np.max(np.abs(a @ x - root * x)))
    if not converged:
        logger.warning(
            "power iteration did not converge in %d iterations (residual %.3e); using dense eig",
            max_iter,
            residual,
        )
        root, x = _dense_fallback(a)
        residual = float(np.max(np.abs(a @ x - root * x)))
    logger.debug("perron root %.15g after %d iterations (residual %.3e)", root, it, residual)
    return PerronPair(root=root, vector=x, iterations=it, converged=converged, residual=residual)


def spectral_radius(
    matrix: np.ndarray,
    tol: float = DEFAULT_TOLERANCES.perron_tol,
    max_iter: int = DEFAULT_TOLERANCES.perron_max_iter,
) -> float:
    """Spectral radius of a nonnegative matrix (possibly reducible or periodic)."""
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return 0.0
    if a.shape[0] <= _DENSE_LIMIT:
        return float(np.max(np.abs(np.linalg.eigvals(a))))
    return max(perron_pair(a, tol=tol, max_iter=max_iter, shift=True).root, 0.0)
