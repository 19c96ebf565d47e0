"""
JSON model documents.

Two shapes are accepted, both with exact keys:

    {"patches": [1, 2, 2], "dispersal": [[...], ...], "mean_offspring": {"1": 2.0, "2": 0.5}}
    {"builder": {"family": "cycle_pipeline", "n": 7, ...}}

`patches` lists the habitat label of each patch, in patch order (patch 1 first).
"""
from __future__ import annotations
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Union

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from packages.core.errors import DocumentError, MetapopError
from packages.core.model import builders
from packages.core.model.patchgraph import PatchGraph


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TwoPatchSpec(_Strict):
    family: Literal["two_patch"]
    M: float
    m: float
    p: float
    q: float

    def build(self) -> PatchGraph:
        return builders.build_two_patch(self.M, self.m, self.p, self.q)


class CyclePipelineSpec(_Strict):
    family: Literal["cycle_pipeline"]
    n: int
    p: float
    L: float
    R: float
    s: float
    l: float
    r: float
    M: float
    m: float

    def build(self) -> PatchGraph:
        return builders.build_cycle_pipeline(
            self.n, self.p, self.L, self.R, self.s, self.l, self.r, self.M, self.m
        )


class ChessboardSpec(_Strict):
    family: Literal["chessboard"]
    M: float
    m: float
    sigma: float = 0.2

    def build(self) -> PatchGraph:
        return builders.build_chessboard(self.M, self.m, self.sigma)


class StarSpec(_Strict):
    family: Literal["star"]
    d: int
    n: int
    p: float
    s: float
    l: float
    r: float
    M: float
    m: float

    def build(self) -> PatchGraph:
        return builders.build_star(self.d, self.n, self.p, self.s, self.l, self.r, self.M, self.m)


class PeriodicArraySpec(_Strict):
    family: Literal["periodic_array"]
    pattern: List[Union[int, str]]
    stay: float
    left: float
    right: float
    mean_offspring: Dict[int, float]

    def build(self) -> PatchGraph:
        return builders.build_periodic_array(
            self.pattern, self.stay, self.left, self.right, self.mean_offspring
        )


BuilderSpec = Annotated[
    Union[TwoPatchSpec, CyclePipelineSpec, ChessboardSpec, StarSpec, PeriodicArraySpec],
    Field(discriminator="family"),
]


class BuilderDocument(_Strict):
    builder: BuilderSpec


class GraphDocument(_Strict):
    patches: List[int] = Field(min_length=1)
    dispersal: List[List[float]]
    mean_offspring: Dict[int, float]

    def build(self) -> PatchGraph:
        return PatchGraph.from_arrays(self.patches, self.dispersal, self.mean_offspring)


def _validation_message(err: ValidationError) -> str:
    first = err.errors()[0]
    where = ".".join(str(part) for part in first.get("loc", ()))
    return f"{where}: {first.get('msg')}" if where else str(first.get("msg"))


def parse_json(raw: bytes | str, source: str = "<document>") -> Any:
    try:
        return orjson.loads(raw)
    except orjson.JSONDecodeError as e:
        raise DocumentError(f"{source}: malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from e


def load_json(path: str | Path) -> Any:
    p = Path(path)
    return parse_json(p.read_bytes(), source=str(p))


def graph_from_document(data: Any) -> PatchGraph:
    if not isinstance(data, dict):
        raise DocumentError("model document must be a JSON object")
    try:
        if "builder" in data:
            return BuilderDocument.model_validate(data).builder.build()
        return GraphDocument.model_validate(data).build()
    except ValidationError as e:
        raise DocumentError(f"invalid model document: {_validation_message(e)}") from e
    except MetapopError:
        raise
    except ValueError as e:
        raise DocumentError(f"invalid model document: {e}") from e


def load_model(path: str | Path) -> PatchGraph:
    return graph_from_document(load_json(path))


def graph_document(graph: PatchGraph) -> Dict[str, Any]:
    """Explicit (non-builder) document for a graph; used for digests and report echoes."""
    return {
        "patches": list(graph.habitat_of),
        "dispersal": [list(row) for row in graph.dispersal],
        "mean_offspring": {str(k): v for k, v in sorted(graph.mean_offspring.items())},
    }
