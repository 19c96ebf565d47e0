"""
Exact analytics for a single disperser X, the Markov chain with transition
matrix D on the patches.

Patch sets are collections of 0-based patch indices. `origin` is the patch the
walk starts from; it defaults to the smallest index of the source set.
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Collection, Literal, Optional, Tuple

import numpy as np

from packages.core.config import DEFAULT_TOLERANCES, Tolerances, get_logger
from packages.core.errors import ConvergenceError, DegenerateParameterError, DivergentSeriesError
from packages.core.model.patchgraph import PatchGraph, require_valid
from packages.core.numerics import solve_dense, spectral_radius

logger = get_logger(__name__)

ReturnStatus = Literal["finite", "divergent", "critical-indeterminate"]


@dataclass(frozen=True)
class StationaryDistribution:
    u: np.ndarray
    residual: float


@dataclass(frozen=True)
class HittingWeights:
    """E[product of sink means until the source set is hit], per sink patch."""

    patches: Tuple[int, ...]
    values: np.ndarray


@dataclass(frozen=True)
class TabooReturn:
    value: float
    status: ReturnStatus
    taboo_radius: float


def _split(num_patches: int, source_set: Collection[int]) -> Tuple[np.ndarray, np.ndarray]:
    inside = np.zeros(num_patches, dtype=bool)
    for i in source_set:
        if not 0 <= i < num_patches:
            raise DegenerateParameterError(f"patch index {i} out of range for {num_patches} patches")
        inside[i] = True
    if not inside.any():
        raise DegenerateParameterError("source set must not be empty")
    return np.flatnonzero(inside), np.flatnonzero(~inside)


def _origin(source_set: Collection[int], origin: Optional[int]) -> int:
    return min(source_set) if origin is None else origin


def stationary(graph: PatchGraph, tol: Tolerances = DEFAULT_TOLERANCES) -> StationaryDistribution:
    require_valid(graph)
    d = graph.D
    k = d.shape[0]
    # uD = u with the last balance equation replaced by sum(u) = 1
    system = (np.eye(k) - d).T
    system[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    u = solve_dense(system, rhs)
    u = np.clip(u, 0.0, None)
    u /= u.sum()
    residual = float(np.max(np.abs(u @ d - u)))
    if residual > tol.linear_residual:
        raise ConvergenceError("stationary distribution did not meet the residual bound", residual)
    return StationaryDistribution(u=u, residual=residual)


def _exit_law(d: np.ndarray, origin: int, sinks: np.ndarray) -> Tuple[np.ndarray, float]:
    weights = d[origin, sinks]
    p = float(weights.sum())
    if p <= 0.0:
        raise DegenerateParameterError(f"patch {origin + 1} never moves into a sink")
    return weights / p, p


def _common_sink_mean(graph: PatchGraph, sinks: np.ndarray) -> float:
    means = graph.means[sinks]
    if np.ptp(means) > 1e-12:
        raise DegenerateParameterError("all patches outside the source set must share one mean")
    return float(means[0])


def hitting_weights(
    graph: PatchGraph, source_set: Collection[int], tol: Tolerances = DEFAULT_TOLERANCES
) -> HittingWeights:
    """h solving (I - m D_sink) h = m d_{sink -> source set}."""
    require_valid(graph)
    sources, sinks = _split(graph.num_patches, source_set)
    if sinks.size == 0:
        raise DegenerateParameterError("source set covers every patch; there are no sinks")
    d = graph.D
    m = _common_sink_mean(graph, sinks)
    taboo = m * d[np.ix_(sinks, sinks)]
    radius = spectral_radius(taboo, tol=tol.perron_tol, max_iter=tol.perron_max_iter)
    if radius >= 1.0:
        raise DivergentSeriesError(
            f"sink mean {m} is too large: spectral radius of m D_sink is {radius:.6g} >= 1"
        )
    rhs = m * d[np.ix_(sinks, sources)].sum(axis=1)
    h = solve_dense(np.eye(sinks.size) - taboo, rhs)
    return HittingWeights(patches=tuple(int(j) for j in sinks), values=h)


def depleting_rate(
    graph: PatchGraph,
    source_set: Collection[int],
    origin: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """e = E(m^S), S the time spent in sinks after leaving `origin`."""
    weights = hitting_weights(graph, source_set, tol)
    exit_law, _ = _exit_law(graph.D, _origin(source_set, origin), np.array(weights.patches))
    e = float(exit_law @ weights.values)
    logger.debug("depleting rate %.12g from origin %s", e, _origin(source_set, origin) + 1)
    return e


def mean_sink_sojourn(
    graph: PatchGraph, source_set: Collection[int], origin: Optional[int] = None
) -> float:
    """E(S) via the hitting-time system (I - D_sink) t = 1."""
    require_valid(graph)
    _, sinks = _split(graph.num_patches, source_set)
    if sinks.size == 0:
        raise DegenerateParameterError("source set covers every patch; there are no sinks")
    d = graph.D
    t = solve_dense(np.eye(sinks.size) - d[np.ix_(sinks, sinks)], np.ones(sinks.size))
    exit_law, _ = _exit_law(d, _origin(source_set, origin), sinks)
    return float(exit_law @ t)


def taboo_return(
    dispersal: np.ndarray,
    means: np.ndarray,
    return_set: Collection[int],
    origin: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> TabooReturn:
    """
    m_origin * E[product of m_{X_i} over the excursion before the first return to `return_set`].

    Works on raw arrays so periodic chains (e.g. the patch x parity chain of a
    periodic environment) can be handled too; only the taboo block has to be
    subcritical.
    """
    d = np.asarray(dispersal, dtype=float)
    m = np.asarray(means, dtype=float)
    inside, outside = _split(d.shape[0], return_set)
    start = _origin(return_set, origin)
    direct = float(d[start, inside].sum())
    if outside.size == 0:
        return TabooReturn(value=float(m[start] * direct), status="finite", taboo_radius=0.0)

    taboo = m[outside, None] * d[np.ix_(outside, outside)]
    radius = spectral_radius(taboo, tol=tol.perron_tol, max_iter=tol.perron_max_iter)
    if abs(radius - 1.0) <= tol.critical_band:
        logger.warning("taboo process is critical (radius %.15g); value left indeterminate", radius)
        return TabooReturn(value=float("inf"), status="critical-indeterminate", taboo_radius=radius)
    if radius > 1.0:
        return TabooReturn(value=float("inf"), status="divergent", taboo_radius=radius)

    rhs = m[outside] * d[np.ix_(outside, inside)].sum(axis=1)
    w = solve_dense(np.eye(outside.size) - taboo, rhs)
    value = float(m[start] * (direct + d[start, outside] @ w))
    return TabooReturn(value=value, status="finite", taboo_radius=radius)


def weighted_return_value(
    graph: PatchGraph,
    return_set: Collection[int],
    origin: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    require_valid(graph)
    return taboo_return(graph.D, graph.means, return_set, origin, tol).value
