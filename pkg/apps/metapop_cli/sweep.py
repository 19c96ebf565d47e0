"""
Parameter sweeps over model / environment documents.

A sweep spec reads `path[,path...]=start:stop:steps`. Paths are dotted keys
into the model document; a leading `env.` addresses the environment document
instead. Numeric segments index lists. Every listed path receives the same
grid value.
"""
from __future__ import annotations
from copy import deepcopy
from typing import Any, List, Tuple

import numpy as np
from pydantic import BaseModel

from packages.core.errors import DocumentError

ENV_PREFIX = "env."


class SweepSpec(BaseModel):
    paths: List[str]
    start: float
    stop: float
    steps: int

    @property
    def label(self) -> str:
        return ",".join(self.paths)

    def grid(self) -> List[float]:
        if self.steps == 1:
            return [self.start]
        return [float(x) for x in np.linspace(self.start, self.stop, self.steps)]


def parse_sweep(text: str) -> SweepSpec:
    try:
        lhs, rhs = text.split("=", 1)
        start, stop, steps = rhs.split(":")
        spec = SweepSpec(
            paths=[p.strip() for p in lhs.split(",") if p.strip()],
            start=float(start),
            stop=float(stop),
            steps=int(steps),
        )
    except ValueError as e:
        raise DocumentError(f"sweep must look like path=start:stop:steps, got {text!r}") from e
    if not spec.paths or spec.steps < 1:
        raise DocumentError(f"sweep needs at least one path and one step, got {text!r}")
    return spec


def _set_path(document: Any, segments: List[str], value: float, full: str) -> None:
    node = document
    for i, seg in enumerate(segments):
        last = i == len(segments) - 1
        if isinstance(node, list):
            try:
                idx = int(seg)
                node[idx]
            except (ValueError, IndexError):
                raise DocumentError(f"invalid parameter path {full!r}: no list index {seg!r}") from None
            if last:
                node[idx] = value
            else:
                node = node[idx]
        elif isinstance(node, dict):
            if seg not in node:
                raise DocumentError(f"invalid parameter path {full!r}: no key {seg!r}")
            if last:
                node[seg] = value
            else:
                node = node[seg]
        else:
            raise DocumentError(f"invalid parameter path {full!r}: {seg!r} is below a scalar")


def apply_point(model_doc: Any, env_doc: Any, spec: SweepSpec, value: float) -> Tuple[Any, Any]:
    """Copies of both documents with every swept path set to `value`."""
    model_out, env_out = deepcopy(model_doc), deepcopy(env_doc)
    for path in spec.paths:
        if path.startswith(ENV_PREFIX):
            if env_out is None:
                raise DocumentError(f"parameter path {path!r} needs an environment document")
            _set_path(env_out, path[len(ENV_PREFIX):].split("."), value, path)
        else:
            _set_path(model_out, path.split("."), value, path)
    return model_out, env_out
