"""Malthusian growth rate and ancestral occupancy from the Perron pair of A."""
from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from packages.core.config import DEFAULT_TOLERANCES, Tolerances, get_logger
from packages.core.errors import ConvergenceError
from packages.core.model.patchgraph import PatchGraph, is_primitive, require_valid
from packages.core.numerics import perron_pair

logger = get_logger(__name__)

# raise only well past the documented residual bound; in between we warn
_HARD_RESIDUAL = 1e-7


@dataclass(frozen=True)
class SpectralData:
    rho: float
    left: np.ndarray
    right: np.ndarray
    phi: np.ndarray
    left_residual: float
    right_residual: float
    iterations: int


def spectral_from_matrix(a: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralData:
    a = np.asarray(a, dtype=float)
    shift = not is_primitive(a)
    right = perron_pair(a, side="right", tol=tol.perron_tol, max_iter=tol.perron_max_iter, shift=shift)
    left = perron_pair(a, side="left", tol=tol.perron_tol, max_iter=tol.perron_max_iter, shift=shift)
    rho = right.root
    phi = left.vector * right.vector
    phi = phi / phi.sum()
    scale = max(rho, 1.0)
    left_res = float(np.max(np.abs(left.vector @ a - rho * left.vector)))
    right_res = float(np.max(np.abs(a @ right.vector - rho * right.vector)))
    worst = max(left_res, right_res)
    if worst > _HARD_RESIDUAL * scale:
        raise ConvergenceError("Perron eigenvectors failed the residual check", worst)
    if worst > tol.linear_residual * scale:
        logger.warning("Perron residual %.3e exceeds %.1e", worst, tol.linear_residual)
    return SpectralData(
        rho=rho,
        left=left.vector,
        right=right.vector,
        phi=phi,
        left_residual=left_res,
        right_residual=right_res,
        iterations=max(left.iterations, right.iterations),
    )


def perron(graph: PatchGraph, tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralData:
    """rho = Perron root of A; phi_i proportional to left_i * right_i."""
    require_valid(graph)
    return spectral_from_matrix(graph.means[:, None] * graph.D, tol)
