"""
Persistence criteria in a constant environment.

The general criterion compares with 1 the mean number of descendants of one
individual in the reference source that are born back in that source, counted
along the first return of a single disperser. The two-habitat forms are the
same quantity written with the depleting rate e = E(m^S).
"""
from __future__ import annotations
from typing import Optional

from packages.core.config import DEFAULT_TOLERANCES, Tolerances
from packages.core.disperser.walk import depleting_rate, mean_sink_sojourn, taboo_return
from packages.core.errors import DegenerateParameterError
from packages.core.model.patchgraph import PatchGraph, reference_source, require_valid
from packages.core.persistence.verdict import PersistenceVerdict, make_verdict


def criterion_general(
    graph: PatchGraph, source: Optional[int] = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> PersistenceVerdict:
    require_valid(graph)
    src = reference_source(graph) if source is None else source
    ret = taboo_return(graph.D, graph.means, {src}, src, tol)
    return make_verdict(
        ret.value,
        route="first_return",
        diagnostics={"reference_source": src + 1, "taboo_radius": ret.taboo_radius, "status": ret.status},
        band=tol.boundary,
        indeterminate=ret.status == "critical-indeterminate",
    )


def _check_prob(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DegenerateParameterError(f"{name} must lie in [0, 1], got {value}")


def criterion_two_habitat(
    M: float, m: float, p: float, e: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> PersistenceVerdict:
    """M(1 - p) + e M p > 1."""
    _check_prob("p", p)
    _check_prob("e", e)
    value = M * (1.0 - p) + e * M * p
    return make_verdict(
        value, route="two_habitat", diagnostics={"M": M, "m": m, "p": p, "e": e}, band=tol.boundary
    )


def criterion_sigma_form(
    M: float, p: float, e: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> PersistenceVerdict:
    """E(M^sigma m^S) = M p e / (1 - M(1 - p)), sigma the first time the source is left."""
    _check_prob("p", p)
    _check_prob("e", e)
    stay = M * (1.0 - p)
    value = float("inf") if stay >= 1.0 else M * p * e / (1.0 - stay)
    return make_verdict(
        value, route="sigma_form", diagnostics={"M": M, "p": p, "e": e}, band=tol.boundary
    )


def sufficient_mean_sojourn(M: float, m: float, p: float, ES: float) -> bool:
    """E(S) < (M - 1) / (M p (1 - m)) guarantees persistence; False is inconclusive."""
    if not m < 1.0 < M:
        raise DegenerateParameterError(f"need m < 1 < M, got m={m}, M={M}")
    if not 0.0 < p <= 1.0:
        raise DegenerateParameterError(f"p must lie in (0, 1], got {p}")
    return ES < (M - 1.0) / (M * p * (1.0 - m))


def criterion_two_habitat_graph(
    graph: PatchGraph, source: Optional[int] = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> PersistenceVerdict:
    """Two-habitat criterion with M, m, p, e and E(S) read off a graph.

    Every patch sharing the reference source's habitat counts as a source, and
    the remaining patches must share a single mean.
    """
    require_valid(graph)
    src = reference_source(graph) if source is None else source
    sources = graph.patches_of(graph.habitat_of[src])
    sinks = [i for i in range(graph.num_patches) if i not in sources]
    if not sinks:
        raise DegenerateParameterError("graph has no sink patches")
    means = graph.means
    M = float(means[src])
    m = float(means[sinks[0]])
    p = float(graph.D[src, sinks].sum())
    e = depleting_rate(graph, sources, origin=src, tol=tol)
    ES = mean_sink_sojourn(graph, sources, origin=src)
    verdict = criterion_two_habitat(M, m, p, e, tol)
    diagnostics = dict(verdict.diagnostics, mean_sojourn=ES, reference_source=src + 1)
    if m < 1.0 < M:
        diagnostics["sufficient_mean_sojourn"] = sufficient_mean_sojourn(M, m, p, ES)
    return verdict.model_copy(update={"diagnostics": diagnostics})
