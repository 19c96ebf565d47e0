"""
Growth in an environment alternating e1, e2, e1, ... (generation 0 in e1).

Over two generations the population has mean matrix a = A(e1) A(e2), so
rho^2 is its Perron root. The variational side runs on pairs of consecutive
positions: states are the edges (i, j) with d_ij > 0, the pair chain moves
(i, j) -> (k, l) with probability d_jk d_kl and pays m_i(e1) m_j(e2).
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Tuple
import math

import numpy as np

from packages.core.config import DEFAULT_TOLERANCES, Tolerances, get_logger
from packages.core.disperser.walk import stationary
from packages.core.environment.matrices import two_step_array
from packages.core.environment.model import EnvironmentModel
from packages.core.errors import InvalidEnvironmentError
from packages.core.growth.spectral import spectral_from_matrix
from packages.core.growth.variational import variational_from_arrays
from packages.core.model.patchgraph import PatchGraph, require_valid

logger = get_logger(__name__)


@dataclass(frozen=True)
class PairChain:
    edges: Tuple[Tuple[int, int], ...]
    transition: np.ndarray
    payoff: np.ndarray
    start: np.ndarray


@dataclass(frozen=True)
class PeriodicGrowth:
    rho: float
    rho_variational: float
    edges: Tuple[Tuple[int, int], ...]
    phi_pairs: np.ndarray
    phi_patch: np.ndarray
    phi_season1: np.ndarray
    phi_lineage: np.ndarray
    agreement: float
    consistent: bool


def pair_chain(graph: PatchGraph, env: EnvironmentModel) -> PairChain:
    d = graph.D
    e1 = env.state_means(graph, 0)
    e2 = env.state_means(graph, 1)
    edges = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(d > 0)))
    heads = np.array([j for _, j in edges])
    tails = np.array([i for i, _ in edges])
    tails_next = tails[None, :]
    heads_next = heads[None, :]
    transition = d[heads[:, None], tails_next] * d[tails_next, heads_next]
    payoff = e1[tails] * e2[heads]
    u = stationary(graph).u
    start = u[tails] * d[tails, heads]
    return PairChain(edges=edges, transition=transition, payoff=payoff, start=start / start.sum())


def periodic_growth(
    graph: PatchGraph, env: EnvironmentModel, tol: Tolerances = DEFAULT_TOLERANCES
) -> PeriodicGrowth:
    require_valid(graph)
    if env.kind != "periodic":
        raise InvalidEnvironmentError(f"expected a periodic environment, got {env.kind}")
    spectral = spectral_from_matrix(two_step_array(graph, env), tol)
    rho = math.sqrt(spectral.rho)

    chain = pair_chain(graph, env)
    vg = variational_from_arrays(chain.transition, chain.payoff, chain.start, tol)
    rho_variational = math.exp(0.5 * vg.log_rho)

    k = graph.num_patches
    phi_patch = np.zeros(k)
    phi_season1 = np.zeros(k)
    for (i, j), weight in zip(chain.edges, vg.phi):
        phi_season1[i] += weight
        phi_patch[j] += weight
    agreement = max(abs(math.log(rho) - 0.5 * vg.log_rho), vg.agreement)
    consistent = agreement <= tol.route_agreement
    if not consistent:
        logger.warning("periodic growth routes disagree by %.3e", agreement)
    return PeriodicGrowth(
        rho=rho,
        rho_variational=rho_variational,
        edges=chain.edges,
        phi_pairs=vg.phi,
        phi_patch=phi_patch,
        phi_season1=phi_season1,
        phi_lineage=0.5 * (phi_season1 + phi_patch),
        agreement=agreement,
        consistent=consistent,
    )
