"""
log rho = max over occupancy frequencies f of R(f) - I(f), computed two ways.

Tilted route: u is the left Perron vector of D'_ji = d_ji m_i, the matrix
D''_ji = u_j d_ji / (uD)_i is column-stochastic, and its right Perron vector is
the maximizer phi. Ascent route: exponentiated-gradient ascent of R - I on the
simplex, started from the stationary distribution, the gradient being
log m_j - log(u_j / (uD)_j) with u the maximizer in the definition of I. The
mirror steps shrink like 1/sqrt(t) and crawl on slowly mixing chains, so the
last iterate is refined by BFGS over softmax logits.

Sterile patches (m = 0) carry no lineage, so both routes run on the patches
with positive mean.
"""
from __future__ import annotations
from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize
from scipy.special import softmax

from packages.core.config import DEFAULT_TOLERANCES, Tolerances, get_logger
from packages.core.disperser.walk import stationary
from packages.core.errors import DegenerateParameterError
from packages.core.growth.rate_function import newton_maximizer, payoff_from_arrays, rate_from_arrays
from packages.core.model.patchgraph import PatchGraph, is_primitive, require_valid
from packages.core.numerics import exponentiated_step, perron_pair

logger = get_logger(__name__)

_INNER_SWEEPS = 3
_STALL = 1e-14
_FLOOR = 1e-300
# mirror ascent hands over to BFGS once max_j g_j - f.g drops below this
_HANDOFF_GAP = 1e-3
_POLISH_GTOL = 1e-11
_POLISH_MAX_ITER = 2000


@dataclass(frozen=True)
class VariationalGrowth:
    log_rho: float
    phi: np.ndarray
    tilted_root: float
    log_rho_ascent: float
    phi_ascent: np.ndarray
    ascent_iterations: int
    polish_iterations: int
    agreement: float
    consistent: bool


def fertile_patches(d: np.ndarray, means: np.ndarray) -> np.ndarray:
    """Patches with positive mean that can still be entered from another such patch."""
    keep = means > 0
    while True:
        block = d[np.ix_(keep, keep)]
        entered = block.sum(axis=0) > 0
        if entered.all():
            break
        idx = np.flatnonzero(keep)
        keep[idx[~entered]] = False
    if not keep.any():
        raise DegenerateParameterError("every patch is sterile; the growth rate is 0")
    return keep


def _perron_vector(matrix: np.ndarray, side: str, tol: Tolerances) -> tuple[float, np.ndarray]:
    pair = perron_pair(
        matrix, side=side, tol=tol.perron_tol, max_iter=tol.perron_max_iter,
        shift=not is_primitive(matrix),
    )
    return pair.root, pair.vector


def tilted_route(
    d: np.ndarray, means: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[float, np.ndarray, float]:
    """(log rho, phi, Perron root of D')."""
    keep = fertile_patches(d, means)
    dk = d[np.ix_(keep, keep)]
    root, u = _perron_vector(dk * means[keep][None, :], "left", tol)
    flow = u @ dk
    d_tilted = u[:, None] * dk / flow[None, :]
    _, phi_k = _perron_vector(d_tilted, "right", tol)
    phi = np.zeros_like(means, dtype=float)
    phi[keep] = phi_k / phi_k.sum()
    rate = rate_from_arrays(d, phi, tol)
    return payoff_from_arrays(means, phi) - rate.I, phi, root


def _gradient(dk: np.ndarray, log_m: np.ndarray, u: np.ndarray) -> np.ndarray:
    """d(R - I)/df_j = log m_j - log(u_j / (uD)_j), u the maximizer defining I."""
    return log_m - np.log(u / (u @ dk))


def _mirror_phase(
    dk: np.ndarray, log_m: np.ndarray, f: np.ndarray, tol: Tolerances
) -> tuple[np.ndarray, np.ndarray, int]:
    """Exponentiated-gradient ascent with step mirror_step / sqrt(t).

    u is carried from step to step and refreshed by a few fixed-point sweeps,
    which is enough while f moves slowly.
    """
    u = f.copy()
    it = 0
    for it in range(1, tol.mirror_max_iter + 1):
        for _ in range(_INNER_SWEEPS):
            u = f / (dk @ (f / (u @ dk)))
            u /= u.sum()
        g = _gradient(dk, log_m, u)
        if float(np.max(g) - f @ g) < _HANDOFF_GAP:
            break
        nxt = np.clip(exponentiated_step(f, g, tol.mirror_step / math.sqrt(it)), _FLOOR, None)
        nxt /= nxt.sum()
        stalled = float(np.abs(nxt - f).sum()) < _STALL
        f = nxt
        if stalled:
            break
    return f, u, it


def _polish_phase(
    dk: np.ndarray, log_m: np.ndarray, f: np.ndarray, u: np.ndarray
) -> tuple[np.ndarray, np.ndarray, int]:
    """BFGS on softmax logits z, f = softmax(z); the inner sup is solved exactly each time."""
    state = {"u": u}

    def negative(z: np.ndarray) -> tuple[float, np.ndarray]:
        f = np.clip(softmax(z), _FLOOR, None)
        f /= f.sum()
        state["u"] = newton_maximizer(dk, f, state["u"])
        g = _gradient(dk, log_m, state["u"])
        value = float(f @ g)
        return -value, -(f * (g - value))

    result = minimize(
        negative, np.log(f), jac=True, method="BFGS",
        options={"gtol": _POLISH_GTOL, "maxiter": _POLISH_MAX_ITER},
    )
    f = softmax(result.x)
    return f, newton_maximizer(dk, f, state["u"]), int(result.nit)


def ascent_route(
    d: np.ndarray,
    means: np.ndarray,
    start: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[float, np.ndarray, int, int]:
    """(max R - I found, its argmax, mirror iterations, polish iterations)."""
    keep = fertile_patches(d, means)
    dk = d[np.ix_(keep, keep)]
    log_m = np.log(means[keep])
    f = np.clip(start[keep], _FLOOR, None)
    f /= f.sum()
    f, u, mirror_its = _mirror_phase(dk, log_m, f, tol)
    f, u, polish_its = _polish_phase(dk, log_m, f, u)
    phi = np.zeros_like(means, dtype=float)
    phi[keep] = f
    u_full = np.zeros_like(means, dtype=float)
    u_full[keep] = u
    final = payoff_from_arrays(means, phi) - rate_from_arrays(d, phi, tol, u0=u_full).I
    logger.debug(
        "ascent: %d mirror and %d polish iterations, value %.15g", mirror_its, polish_its, final
    )
    return final, phi, mirror_its, polish_its


def variational_from_arrays(
    d: np.ndarray,
    means: np.ndarray,
    start: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> VariationalGrowth:
    d = np.asarray(d, dtype=float)
    means = np.asarray(means, dtype=float)
    log_rho, phi, root = tilted_route(d, means, tol)
    log_rho_b, phi_b, iterations, polished = ascent_route(d, means, start, tol)
    agreement = abs(log_rho - log_rho_b)
    consistent = agreement <= tol.route_agreement
    if not consistent:
        logger.warning(
            "variational routes disagree: tilted %.12g vs ascent %.12g", log_rho, log_rho_b
        )
    return VariationalGrowth(
        log_rho=log_rho,
        phi=phi,
        tilted_root=root,
        log_rho_ascent=log_rho_b,
        phi_ascent=phi_b,
        ascent_iterations=iterations,
        polish_iterations=polished,
        agreement=agreement,
        consistent=consistent,
    )


def growth_variational(graph: PatchGraph, tol: Tolerances = DEFAULT_TOLERANCES) -> VariationalGrowth:
    """log rho and phi from the variational formula, by the tilted and the ascent routes."""
    require_valid(graph)
    return variational_from_arrays(graph.D, graph.means, stationary(graph, tol).u, tol)
