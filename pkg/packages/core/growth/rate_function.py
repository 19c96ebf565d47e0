"""
Rate function of the empirical occupancy of the disperser,

    I(f) = sup over v > 0 of  sum_j f_j log(v_j / (vD)_j),

and the reproductive pay-off R(f) = sum_i f_i log m_i.

The supremum is found with the fixed point u_j <- f_j / sum_i d_ji f_i / (uD)_i,
which increases the objective at every step. For f on the boundary of the
simplex the iteration runs on the support of f with D restricted to it; the
supremum is then a limit and is generally not attained. When the fixed point
stalls, a Newton solve in log u finishes the job.
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from packages.core.config import DEFAULT_TOLERANCES, Tolerances, get_logger
from packages.core.errors import ConvergenceError
from packages.core.model.patchgraph import PatchGraph
from packages.core.numerics import as_frequency

logger = get_logger(__name__)

# accepted without raising when the iteration budget runs out
_ACCEPTABLE_RESIDUAL = 1e-9
_NEWTON_GTOL = 1e-12
_FLOOR = 1e-300


@dataclass(frozen=True)
class RateFunctionValue:
    f: np.ndarray
    I: float
    maximizer_u: np.ndarray
    iterations: int
    residual: float
    attained: bool


def identity_residual(d: np.ndarray, f: np.ndarray, u: np.ndarray) -> float:
    """max_j |f_j/u_j - sum_i d_ji f_i/(uD)_i| over the support of f."""
    support = f > 0
    ds = d[np.ix_(support, support)]
    fs, us = f[support], u[support]
    flow = us @ ds
    return float(np.max(np.abs(fs / us - ds @ (fs / flow))))


def fixed_point(
    d: np.ndarray,
    f: np.ndarray,
    u0: Optional[np.ndarray] = None,
    tol: float = DEFAULT_TOLERANCES.fixed_point_tol,
    max_iter: int = DEFAULT_TOLERANCES.fixed_point_max_iter,
) -> tuple[np.ndarray, int, bool]:
    """Maximizer u on the support of f (zeros elsewhere). Assumes every column of D_S is nonzero."""
    support = f > 0
    ds = d[np.ix_(support, support)]
    fs = f[support]
    u = fs.copy() if u0 is None else np.clip(u0[support], 1e-300, None)
    u = u / u.sum()
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        flow = u @ ds
        nxt = fs / (ds @ (fs / flow))
        nxt /= nxt.sum()
        delta = float(np.max(np.abs(nxt - u)))
        u = nxt
        if delta <= tol:
            converged = True
            break
    out = np.zeros_like(f)
    out[support] = u
    return out, it, converged


def _log_flow_terms(d: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = np.exp(x - x.max())
    flow = v @ d
    return np.log(flow) + x.max(), v[:, None] * d / flow[None, :]


def newton_maximizer(
    d: np.ndarray, f: np.ndarray, u0: Optional[np.ndarray] = None, gtol: float = _NEWTON_GTOL
) -> np.ndarray:
    """Maximizer u of sum_j f_j log(u_j / (uD)_j) for f > 0, normalized to sum 1.

    Trust-region Newton in x = log u. The objective is invariant under x -> x + c,
    so a penalty on mean(x) pins the maximizer without moving the maximum.
    """
    n = f.size
    x0 = np.log(f if u0 is None else np.clip(u0, _FLOOR, None))
    x0 = x0 - x0.mean()

    def negative(x: np.ndarray) -> tuple[float, np.ndarray]:
        log_flow, w = _log_flow_terms(d, x)
        mean = float(x.mean())
        value = float(f @ x - f @ log_flow) - 0.5 * mean**2
        grad = f - w @ f - mean / n
        return -value, -grad

    def negative_hessian(x: np.ndarray) -> np.ndarray:
        _, w = _log_flow_terms(d, x)
        return np.diag(w @ f) - (w * f[None, :]) @ w.T + 1.0 / n**2

    result = minimize(
        negative, x0, jac=True, hess=negative_hessian, method="trust-exact",
        options={"gtol": gtol, "maxiter": 500},
    )
    u = np.exp(result.x - result.x.max())
    return u / u.sum()


def rate_from_arrays(
    d: np.ndarray,
    f: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
    u0: Optional[np.ndarray] = None,
) -> RateFunctionValue:
    support = f > 0
    ds = d[np.ix_(support, support)]
    if np.any(ds.sum(axis=0) <= 0.0):
        # some patch of the support can only be entered from outside it
        return RateFunctionValue(
            f=f, I=float("inf"), maximizer_u=np.zeros_like(f), iterations=0,
            residual=0.0, attained=False,
        )
    u, iterations, converged = fixed_point(d, f, u0, tol.fixed_point_tol, tol.fixed_point_max_iter)
    residual = identity_residual(d, f, u)
    if not converged and residual > _ACCEPTABLE_RESIDUAL:
        u[support] = newton_maximizer(ds, f[support], u[support])
        residual = identity_residual(d, f, u)
        logger.debug("fixed point stalled; newton polish reached residual %.3e", residual)
    if not converged:
        if residual > _ACCEPTABLE_RESIDUAL:
            raise ConvergenceError("rate function fixed point did not converge", residual)
        logger.warning("rate function fixed point stopped at residual %.3e", residual)
    us = u[support]
    value = float(np.sum(f[support] * np.log(us / (us @ ds))))
    return RateFunctionValue(
        f=f, I=max(value, 0.0), maximizer_u=u,
        iterations=iterations, residual=residual, attained=bool(support.all()),
    )


def rate_function(
    graph: PatchGraph, f: Sequence[float] | np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> RateFunctionValue:
    """I(f), the cost of the f-occupancy scheme."""
    return rate_from_arrays(graph.D, as_frequency(f), tol)


def payoff_from_arrays(means: np.ndarray, f: np.ndarray) -> float:
    with np.errstate(divide="ignore"):
        return float(np.sum(xlogy(f, means)))


def reproductive_payoff(graph: PatchGraph, f: Sequence[float] | np.ndarray) -> float:
    """R(f) = sum f_i log m_i; -inf when f charges a sterile patch."""
    return payoff_from_arrays(graph.means, as_frequency(f))
