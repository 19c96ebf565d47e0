from __future__ import annotations
from typing import Annotated, Any
import math

from pydantic import BeforeValidator, PlainSerializer


def _ext_in(value: Any) -> Any:
    if isinstance(value, str) and value in {"inf", "-inf", "nan"}:
        return float(value)
    return value


def _ext_out(value: float) -> float | str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


# float that survives JSON, where +-inf is written as "inf" / "-inf"
ExtReal = Annotated[float, BeforeValidator(_ext_in), PlainSerializer(_ext_out, when_used="json")]
