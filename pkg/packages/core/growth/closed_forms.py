"""
Closed forms for two patches with p + q = 1, where the disperser's positions
are i.i.d. with law (q, 1 - q).
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence
import math

import numpy as np
from scipy.special import xlogy

from packages.core.errors import DegenerateParameterError


def _check_q(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise DegenerateParameterError(f"q must lie strictly between 0 and 1, got {q}")


@dataclass(frozen=True)
class TwoPatchClosedForms:
    rho: float
    phi: np.ndarray
    q: float

    def rate(self, f: Sequence[float]) -> float:
        """I(f) = f1 log(f1/q) + f2 log(f2/(1-q))."""
        f1, f2 = float(f[0]), float(f[1])
        return float(xlogy(f1, f1 / self.q) + xlogy(f2, f2 / (1.0 - self.q)))


def two_patch_closed_forms(M: float, m: float, q: float) -> TwoPatchClosedForms:
    _check_q(q)
    source = q * M
    sink = (1.0 - q) * m
    total = source + sink
    return TwoPatchClosedForms(rho=total, phi=np.array([source / total, sink / total]), q=q)


@dataclass(frozen=True)
class PeriodicTwoPatchClosedForms:
    rho: float
    phi_pairs: np.ndarray  # [E1, E2]: patch E1 in season e1, E2 in season e2


def periodic_two_patch_closed_forms(
    M1: float, M2: float, m1: float, m2: float, q: float
) -> PeriodicTwoPatchClosedForms:
    """Source means M1, M2 and sink means m1, m2 in seasons e1, e2."""
    _check_q(q)
    p = 1.0 - q
    eps = np.array([q, p])
    season1 = eps * np.array([M1, m1])
    season2 = eps * np.array([M2, m2])
    weights = np.outer(season1, season2)
    rho = math.sqrt(season1.sum() * season2.sum())
    return PeriodicTwoPatchClosedForms(rho=rho, phi_pairs=weights / weights.sum())
