from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
import logging
import os
import sys

import yaml
from pydantic import BaseModel, ConfigDict

_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_ROOT_LOGGER = "metapop"


def _get_bool(env_name: str, default: bool) -> bool:
    val = os.getenv(env_name)
    if val is None:
        return default
    return val.lower() in {"1", "true", "yes", "on"}


def _get_int(env_name: str, default: int) -> int:
    val = os.getenv(env_name)
    if val is None or not val.strip():
        return default
    return int(val)


@dataclass
class Settings:
    threads: int = field(default_factory=lambda: _get_int("METAPOP_THREADS", 0))
    population_cap: int = field(default_factory=lambda: _get_int("METAPOP_POPULATION_CAP", 10_000_000))
    log_level: str = field(default_factory=lambda: os.getenv("METAPOP_LOG_LEVEL", "WARNING"))
    tolerances_path: str = field(
        default_factory=lambda: os.getenv("METAPOP_TOLERANCES", "config/tolerances.yaml")
    )
    test_fault: str = field(default_factory=lambda: os.getenv("METAPOP_TEST_FAULT", ""))
    trace: bool = field(default_factory=lambda: _get_bool("METAPOP_TRACE", False))

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1


def get_settings() -> Settings:
    return Settings()


class Tolerances(BaseModel):
    """Numerical tolerances shared by the analytic routes and the cross-checks."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    boundary: float = 1e-9
    linear_residual: float = 1e-10
    perron_tol: float = 1e-13
    perron_max_iter: int = 100_000
    critical_band: float = 1e-9
    fixed_point_tol: float = 1e-12
    fixed_point_max_iter: int = 100_000
    mirror_max_iter: int = 10_000
    mirror_step: float = 0.1
    route_agreement: float = 1e-6
    phi_agreement: float = 1e-8


DEFAULT_TOLERANCES = Tolerances()


def load_tolerances(path: str | None) -> Tolerances:
    if path and Path(path).exists():
        with open(path, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        merged = DEFAULT_TOLERANCES.model_dump()
        merged.update(loaded)
        return Tolerances(**merged)
    return DEFAULT_TOLERANCES


def get_logger(name: str) -> logging.Logger:
    root = logging.getLogger(_ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(get_settings().log_level.upper())
        root.propagate = False
    if name.startswith(_ROOT_LOGGER):
        return logging.getLogger(name)
    return logging.getLogger(f"{_ROOT_LOGGER}.{name}")
