from __future__ import annotations
from typing import Any


class MetapopError(ValueError):
    """Base class for every domain error raised by the toolkit."""


class InvalidGraphError(MetapopError):
    def __init__(self, message: str, report: Any | None = None) -> None:
        super().__init__(message)
        self.report = report


class InvalidEnvironmentError(MetapopError):
    pass


class DegenerateParameterError(MetapopError):
    pass


class DivergentSeriesError(MetapopError):
    pass


class ConvergenceError(MetapopError):
    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class InconsistentRoutesError(MetapopError):
    pass


class AllExtinctError(MetapopError):
    pass


class DocumentError(MetapopError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column
