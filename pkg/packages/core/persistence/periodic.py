"""
Persistence in environments that alternate between two seasons e1, e2
(generation 0 in e1), and per-patch growth without dispersal.
"""
from __future__ import annotations
from typing import Optional

import numpy as np
from scipy.special import xlogy

from packages.core.config import DEFAULT_TOLERANCES, Tolerances
from packages.core.disperser.walk import taboo_return
from packages.core.environment.model import EnvironmentModel
from packages.core.errors import DegenerateParameterError, InvalidEnvironmentError
from packages.core.model.patchgraph import PatchGraph, reference_source, require_valid
from packages.core.persistence.verdict import PersistenceVerdict, make_verdict


def criterion_periodic_two_patch(
    M1: float, M2: float, m1: float, m2: float, p: float, q: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PersistenceVerdict:
    """Source means M1, M2 and sink means m1, m2 in seasons e1, e2."""
    for name, value in (("p", p), ("q", q)):
        if not 0.0 < value < 1.0:
            raise DegenerateParameterError(f"{name} must lie strictly between 0 and 1, got {value}")
    lhs = (
        M1 * M2 * (1.0 - p) ** 2
        + (M1 * m2 + m1 * M2) * p * q
        + m1 * m2 * (1.0 - q) ** 2
    )
    rhs = min(2.0, 1.0 + M1 * M2 * m1 * m2 * (1.0 - p - q) ** 2)
    return make_verdict(
        lhs / rhs, route="periodic_two_patch", diagnostics={"lhs": lhs, "rhs": rhs}, band=tol.boundary
    )


def doubled_chain(graph: PatchGraph, env: EnvironmentModel) -> tuple[np.ndarray, np.ndarray]:
    """Chain on (patch, parity): state parity * K + i, every step flips the parity.

    Returns the transition matrix and the per-state means m_i(e1) / m_i(e2).
    """
    k = graph.num_patches
    d = graph.D
    chain = np.zeros((2 * k, 2 * k))
    chain[:k, k:] = d
    chain[k:, :k] = d
    means = np.concatenate([env.state_means(graph, 0), env.state_means(graph, 1)])
    return chain, means


def criterion_periodic_general(
    graph: PatchGraph,
    env: EnvironmentModel,
    source: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> PersistenceVerdict:
    """m_src(e1) E[product of seasonal means] over the first even-time return to the source."""
    require_valid(graph)
    if env.kind != "periodic":
        raise InvalidEnvironmentError(f"expected a periodic environment, got {env.kind}")
    chain, means = doubled_chain(graph, env)
    src = reference_source(graph, env.state_means(graph, 0)) if source is None else source
    ret = taboo_return(chain, means, {src}, src, tol)
    return make_verdict(
        ret.value,
        route="periodic_even_return",
        diagnostics={"reference_source": src + 1, "taboo_radius": ret.taboo_radius, "status": ret.status},
        band=tol.boundary,
        indeterminate=ret.status == "critical-indeterminate",
    )


def isolated_growth(graph: PatchGraph, env: Optional[EnvironmentModel] = None) -> np.ndarray:
    """Growth factor per generation of each patch if nobody ever dispersed."""
    if env is None or env.kind == "constant":
        return graph.means if env is None else env.state_means(graph, 0)
    e1 = env.state_means(graph, 0)
    e2 = env.state_means(graph, 1)
    if env.kind == "periodic":
        return np.sqrt(e1 * e2)
    nu = env.nu
    with np.errstate(divide="ignore"):
        return np.exp(xlogy(nu, e1) + xlogy(1.0 - nu, e2))


def survival_in_sinks_only(
    graph: PatchGraph, env: Optional[EnvironmentModel], verdict: PersistenceVerdict
) -> bool:
    """Persistence although no patch could sustain a population on its own."""
    return verdict.persists == "yes" and bool(np.all(isolated_growth(graph, env) <= 1.0))
