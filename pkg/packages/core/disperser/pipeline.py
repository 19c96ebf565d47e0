"""
Closed forms for the depleting rate of a pipeline of n identical sinks.

The hitting weights a_k of the sinks satisfy
a_k = m s a_k + m l a_{k-1} + m r a_{k+1} with a_0 = a_{n+1} = 1, whose
characteristic roots lambda > 1 > mu solve m r x^2 - (1 - m s) x + m l = 0.
"""
from __future__ import annotations
from typing import Tuple
import math

from packages.core.errors import DegenerateParameterError

_SUM_TOL = 1e-12


def _check_weights(L: float, R: float, s: float, l: float, r: float, m: float) -> None:
    if abs(L + R - 1.0) > _SUM_TOL:
        raise DegenerateParameterError(f"L + R must sum to 1, got {L + R!r}")
    if abs(s + l + r - 1.0) > _SUM_TOL:
        raise DegenerateParameterError(f"s + l + r must sum to 1, got {s + l + r!r}")
    if not 0.0 < m <= 1.0:
        raise DegenerateParameterError(f"sink mean m must lie in (0, 1], got {m}")
    if r <= 0.0:
        raise DegenerateParameterError("r must be positive for the closed form")


def pipeline_roots(s: float, l: float, r: float, m: float) -> Tuple[float, float]:
    """Ordered roots (lambda, mu), computed without cancellation."""
    b = 1.0 - m * s
    disc = b * b - 4.0 * m * m * l * r
    if disc <= 0.0:
        raise DegenerateParameterError(f"degenerate discriminant {disc!r}: roots are not distinct")
    qq = 0.5 * (b + math.sqrt(disc))
    return qq / (m * r), m * l / qq


def pipeline_depleting_rate(
    n: int, L: float, R: float, s: float, l: float, r: float, m: float
) -> float:
    if n < 1:
        raise DegenerateParameterError(f"n must be at least 1, got {n}")
    _check_weights(L, R, s, l, r, m)
    lam, mu = pipeline_roots(s, l, r, m)
    ratio = mu / lam
    ratio_n = ratio**n
    # both terms divided through by lambda^(n+1)
    term1 = (1.0 - ratio_n) / (lam - mu * ratio_n) * (L + R * lam * mu)
    term2 = (lam - mu) / (1.0 - ratio_n * ratio) * (R * lam ** -(n + 1) + L * mu**n / lam)
    return term1 + term2


def pipeline_depleting_rate_limit(L: float, R: float, s: float, l: float, r: float, m: float) -> float:
    """n -> infinity: e = L / lambda + R mu."""
    _check_weights(L, R, s, l, r, m)
    lam, mu = pipeline_roots(s, l, r, m)
    return L / lam + R * mu


def two_patch_depleting_rate(m: float, q: float) -> float:
    """Two-vertex graph: S is geometric, e = m q / (1 - m (1 - q))."""
    if not 0.0 < q <= 1.0:
        raise DegenerateParameterError(f"q must lie in (0, 1], got {q}")
    if m < 0.0 or m * (1.0 - q) >= 1.0:
        raise DegenerateParameterError(f"series diverges for m={m}, q={q}")
    return m * q / (1.0 - m * (1.0 - q))
