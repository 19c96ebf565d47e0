"""
Lower bound for the growth rate in a two-state Markov environment.

The bound follows the lineage that sits in the source while the environment
is in e1 and in the sink while it is in e2, so only M1 (source, e1) and
m2 (sink, e2) enter.
"""
from __future__ import annotations
from typing import Optional

from scipy.special import xlogy

from packages.core.environment.model import EnvironmentModel
from packages.core.errors import DegenerateParameterError, InvalidEnvironmentError
from packages.core.model.patchgraph import PatchGraph, reference_source, require_valid


def markov_env_lower_bound(
    M1: float, m2: float, p: float, q: float, alpha: float, beta: float
) -> float:
    for name, value in (("p", p), ("q", q), ("alpha", alpha), ("beta", beta)):
        if not 0.0 < value <= 1.0:
            raise DegenerateParameterError(f"{name} must lie in (0, 1], got {value}")
    if M1 <= 0.0 or m2 <= 0.0:
        raise DegenerateParameterError(f"M1 and m2 must be positive, got M1={M1}, m2={m2}")
    nu = beta / (alpha + beta)
    # xlogy keeps 0 * log 0 = 0 and turns x * log 0 into -inf
    return float(
        xlogy(nu, M1)
        + xlogy(1.0 - nu, m2)
        + xlogy(nu * alpha, p * q)
        + xlogy(nu * (1.0 - alpha), 1.0 - p)
        + xlogy((1.0 - nu) * (1.0 - beta), 1.0 - q)
    )


def markov_env_lower_bound_graph(
    graph: PatchGraph, env: EnvironmentModel, source: Optional[int] = None
) -> float:
    """The bound with M1, m2, p, q read off a two-patch graph."""
    require_valid(graph)
    if graph.num_patches != 2:
        raise DegenerateParameterError("the Markov lower bound is defined for two-patch graphs")
    if env.kind != "markov":
        raise InvalidEnvironmentError(f"expected a markov environment, got {env.kind}")
    src = reference_source(graph, env.state_means(graph, 0)) if source is None else source
    sink = 1 - src
    d = graph.D
    M1 = float(env.state_means(graph, 0)[src])
    m2 = float(env.state_means(graph, 1)[sink])
    assert env.alpha is not None and env.beta is not None
    return markov_env_lower_bound(M1, m2, float(d[src, sink]), float(d[sink, src]), env.alpha, env.beta)
