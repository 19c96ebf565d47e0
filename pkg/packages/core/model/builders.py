"""
Builders for the graph families used throughout the package.

Every builder returns a finite PatchGraph. Infinite periodic graphs are only
ever represented through their motif: patches of the same class are merged and
the dispersal weight from a representative P into a class Q is the sum of the
weights into all members of Q (`lump`).

Habitat labels: 1 is the source habitat, 2 the sink habitat, unless a pattern
supplies its own labels.
"""
from __future__ import annotations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from packages.core.errors import DegenerateParameterError
from packages.core.model.patchgraph import PatchGraph

SOURCE = 1
SINK = 2
WEIGHT_TOL = 1e-12

Move = Tuple[int, float]


def _require_open(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise DegenerateParameterError(f"{name} must lie strictly between 0 and 1, got {value}")


def _require_prob(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DegenerateParameterError(f"{name} must lie in [0, 1], got {value}")


def _require_mean(name: str, value: float) -> None:
    if value < 0.0 or not np.isfinite(value):
        raise DegenerateParameterError(f"{name} must be a finite nonnegative mean, got {value}")


def _require_sum(names: str, values: Sequence[float]) -> None:
    total = float(sum(values))
    if abs(total - 1.0) > WEIGHT_TOL:
        raise DegenerateParameterError(f"{names} must sum to 1, got {total!r}")


def lump(num_classes: int, moves: Mapping[int, Iterable[Move]]) -> np.ndarray:
    """Motif dispersal d_PQ = sum of the weights from P into every member of class Q."""
    d = np.zeros((num_classes, num_classes))
    for source_class, targets in moves.items():
        for target_class, weight in targets:
            d[source_class, target_class] += weight
    return d


def build_two_patch(M: float, m: float, p: float, q: float) -> PatchGraph:
    _require_open("p", p)
    _require_open("q", q)
    _require_mean("M", M)
    _require_mean("m", m)
    return PatchGraph.from_arrays(
        habitat_of=[SOURCE, SINK],
        dispersal=[[1.0 - p, p], [q, 1.0 - q]],
        mean_offspring={SOURCE: M, SINK: m},
    )


def _pipeline_moves(
    first: int, n: int, s: float, l: float, r: float, ends: Tuple[int, int]
) -> Dict[int, List[Move]]:
    """Sinks first..first+n-1 in a row; stepping off either end lands on `ends`."""
    moves: Dict[int, List[Move]] = {}
    for k in range(n):
        here = first + k
        left = ends[0] if k == 0 else here - 1
        right = ends[1] if k == n - 1 else here + 1
        moves[here] = [(here, s), (left, l), (right, r)]
    return moves


def build_cycle_pipeline(
    n: int, p: float, L: float, R: float, s: float, l: float, r: float, M: float, m: float
) -> PatchGraph:
    """One source (patch 0) and n identical sinks (1..n) on a cycle.

    The source sends pR to its right neighbour (sink 1) and pL to its left
    neighbour (sink n); sink k steps to k-1 with probability l and to k+1 with
    probability r, the source closing the cycle.
    """
    if n < 1:
        raise DegenerateParameterError(f"n must be at least 1, got {n}")
    _require_open("p", p)
    _require_open("s", s)
    for name, value in (("L", L), ("R", R), ("l", l), ("r", r)):
        _require_prob(name, value)
    _require_sum("L + R", (L, R))
    _require_sum("s + l + r", (s, l, r))
    _require_mean("M", M)
    _require_mean("m", m)

    moves = _pipeline_moves(1, n, s, l, r, ends=(0, 0))
    moves[0] = [(0, 1.0 - p), (1, p * R), (n, p * L)]
    return PatchGraph.from_arrays(
        habitat_of=[SOURCE] + [SINK] * n,
        dispersal=lump(n + 1, moves),
        mean_offspring={SOURCE: M, SINK: m},
    )


def build_chessboard(M: float, m: float, sigma: float = 0.2) -> PatchGraph:
    """Sources and sinks alternating on Z^2; every move goes to one of 4 neighbors of the other color."""
    _require_prob("sigma", sigma)
    _require_mean("M", M)
    _require_mean("m", m)
    step = (1.0 - sigma) / 4.0
    moves = {
        0: [(0, sigma)] + [(1, step)] * 4,
        1: [(1, sigma)] + [(0, step)] * 4,
    }
    return PatchGraph.from_arrays(
        habitat_of=[SOURCE, SINK],
        dispersal=lump(2, moves),
        mean_offspring={SOURCE: M, SINK: m},
    )


def build_star(
    d: int, n: int, p: float, s: float, l: float, r: float, M: float, m: float
) -> PatchGraph:
    """Sources on a d-dimensional lattice joined by pipelines of n sinks.

    The motif is one source plus d pipelines; the source sends p/(2d) to each
    of the 2d pipeline ends.
    """
    if d < 1 or n < 1:
        raise DegenerateParameterError(f"d and n must be at least 1, got d={d}, n={n}")
    _require_open("p", p)
    _require_open("s", s)
    _require_prob("l", l)
    _require_prob("r", r)
    _require_sum("s + l + r", (s, l, r))
    _require_mean("M", M)
    _require_mean("m", m)

    end_weight = p / (2 * d)
    moves: Dict[int, List[Move]] = {0: [(0, 1.0 - p)]}
    for t in range(d):
        first = 1 + t * n
        moves.update(_pipeline_moves(first, n, s, l, r, ends=(0, 0)))
        moves[0] += [(first, end_weight), (first + n - 1, end_weight)]
    return PatchGraph.from_arrays(
        habitat_of=[SOURCE] + [SINK] * (d * n),
        dispersal=lump(1 + d * n, moves),
        mean_offspring={SOURCE: M, SINK: m},
    )


_PATTERN_NAMES = {"source": SOURCE, "sink": SINK}


def _habitat_label(entry: Union[int, str]) -> int:
    if isinstance(entry, str):
        try:
            return _PATTERN_NAMES[entry.lower()]
        except KeyError:
            raise DegenerateParameterError(f"unknown pattern entry {entry!r}") from None
    if entry < 1:
        raise DegenerateParameterError(f"habitat labels start at 1, got {entry}")
    return int(entry)


def build_periodic_array(
    pattern: Sequence[Union[int, str]],
    stay: float,
    left: float,
    right: float,
    mean_offspring: Mapping[int, float],
) -> PatchGraph:
    """A periodic row of habitats collapsed to one period, i.e. a cycle of len(pattern) patches."""
    period = len(pattern)
    if period < 1:
        raise DegenerateParameterError("pattern must not be empty")
    for name, value in (("stay", stay), ("left", left), ("right", right)):
        _require_prob(name, value)
    _require_sum("stay + left + right", (stay, left, right))
    labels = [_habitat_label(entry) for entry in pattern]
    for habitat, mean in mean_offspring.items():
        _require_mean(f"mean_offspring[{habitat}]", mean)
    moves = {
        i: [(i, stay), ((i - 1) % period, left), ((i + 1) % period, right)]
        for i in range(period)
    }
    return PatchGraph.from_arrays(
        habitat_of=labels,
        dispersal=lump(period, moves),
        mean_offspring={int(k): float(v) for k, v in mean_offspring.items()},
    )


MOTIF_FAMILIES = ("chessboard", "star", "periodic_array")


def build_motif(family: str, **params) -> PatchGraph:
    if family == "chessboard":
        return build_chessboard(**params)
    if family == "star":
        return build_star(**params)
    if family == "periodic_array":
        return build_periodic_array(**params)
    raise DegenerateParameterError(f"unknown motif family {family!r}; expected one of {MOTIF_FAMILIES}")
