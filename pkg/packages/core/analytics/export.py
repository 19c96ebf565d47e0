"""JSON and CSV renderings of reports and simulation outcomes."""
from __future__ import annotations
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence
import math

import orjson
import pandas as pd

from packages.core.config import DEFAULT_TOLERANCES
from packages.core.schemas import AnalysisReport
from packages.core.simulate.branching import SimOutcome

JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2
REPORT_COLUMNS = ["quantity", "value", "route", "tolerance", "status"]


def fmt(value: Any) -> str:
    """12 significant digits; infinities as inf / -inf."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, float)):
        v = float(value)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(value)


def dumps(document: Any) -> bytes:
    return orjson.dumps(document, option=JSON_OPTIONS)


def to_json(report: AnalysisReport) -> bytes:
    return dumps(report.model_dump(mode="json"))


def from_json(raw: bytes | str) -> AnalysisReport:
    return AnalysisReport.model_validate(orjson.loads(raw))


def _row(quantity: str, value: Any, route: str, tolerance: Optional[float] = None, status: str = "") -> Dict[str, str]:
    return {
        "quantity": quantity,
        "value": fmt(value),
        "route": route,
        "tolerance": fmt(tolerance),
        "status": status,
    }


def _vector_rows(name: str, values: Optional[Sequence[float]], route: str) -> Iterable[Dict[str, str]]:
    for i, v in enumerate(values or []):
        yield _row(f"{name}[{i + 1}]", v, route)


def report_rows(report: AnalysisReport) -> List[Dict[str, str]]:
    tol = DEFAULT_TOLERANCES
    rows: List[Dict[str, str]] = []
    for v in report.verdicts:
        rows.append(_row("criterion_value", v.criterion_value, v.route, tol.boundary, v.persists))
    for name, route in (("rho_spectral", "spectral"), ("rho_variational", "variational"), ("rho_simulated", "simulation")):
        value = getattr(report, name)
        if value is not None:
            rows.append(_row("rho", value, route))
    rows += _vector_rows("phi", report.phi_spectral, "spectral")
    rows += _vector_rows("phi", report.phi_variational, "variational")
    rows += _vector_rows("phi_lineage", report.phi_lineage, "pairs")
    rows += _vector_rows("phi", report.phi_simulated, "simulation")
    rows += _vector_rows("phi_radius", report.phi_simulated_radius, "simulation")
    scalars = (
        ("depleting_rate", "linear_system"),
        ("depleting_rate_closed_form", "closed_form"),
        ("mean_sink_sojourn", "linear_system"),
        ("markov_lower_bound", "markov_lower_bound"),
        ("gamma_hat", "lyapunov"),
        ("gamma_stderr", "lyapunov"),
    )
    for name, route in scalars:
        value = getattr(report, name)
        if value is not None:
            rows.append(_row(name, value, route))
    rows += _vector_rows("isolated_growth", report.isolated_growth, "no_dispersal")
    if report.survival_in_sinks_only is not None:
        rows.append(_row("survival_in_sinks_only", report.survival_in_sinks_only, "no_dispersal"))
    if report.simulation is not None:
        rows.append(_row("survival_frequency", report.simulation.survival_frequency, "simulation"))
        rows.append(_row("truncated_replicates", report.simulation.truncated, "simulation"))
    for c in report.cross_checks:
        rows.append(_row(f"check:{c.name}", c.delta, f"{c.left_route}~{c.right_route}", c.tolerance, c.status))
    for e in report.errors:
        rows.append(_row(f"error:{e.route}", e.error_type, e.route, None, "error"))
    return rows


def _csv_bytes(frame: pd.DataFrame) -> bytes:
    return frame.to_csv(index=False, lineterminator="\n").encode("utf-8")


def to_csv(report: AnalysisReport) -> bytes:
    return _csv_bytes(pd.DataFrame(report_rows(report), columns=REPORT_COLUMNS))


def trajectories_frame(outcomes: Sequence[SimOutcome]) -> pd.DataFrame:
    records = [
        (generation, patch + 1, count, o.replicate)
        for o in outcomes
        for generation, sizes in enumerate(o.sizes)
        for patch, count in enumerate(sizes)
    ]
    return pd.DataFrame(records, columns=["generation", "patch", "count", "replicate"])


def lineage_frame(outcomes: Sequence[SimOutcome]) -> pd.DataFrame:
    """One row per (surviving replicate, patch): ancestral occupancy frequency; patches are 1-based."""
    records = []
    for o in outcomes:
        if not o.lineage_counts or sum(o.lineage_counts) == 0:
            continue
        total = sum(o.lineage_counts)
        for patch, count in enumerate(o.lineage_counts):
            records.append((o.replicate, patch + 1, fmt(count / total)))
    return pd.DataFrame(records, columns=["replicate", "habitat", "frequency"])


def write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def write_frame(path: Path, frame: pd.DataFrame) -> None:
    write_bytes(path, _csv_bytes(frame))
