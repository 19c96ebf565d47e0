"""
Command implementations. Each returns a process exit code:
0 success, 1 input error, 2 failed cross-check.
"""
from __future__ import annotations
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple
import math
import sys

import pandas as pd
from pydantic import BaseModel

from packages.core.analytics.aggregator import summarize_outcomes
from packages.core.analytics.export import (
    dumps,
    fmt,
    lineage_frame,
    to_csv,
    to_json,
    trajectories_frame,
    write_bytes,
    write_frame,
)
from packages.core.analytics.reports import analyze, generation_growth, headline_verdict
from packages.core.config import Tolerances, get_logger, get_settings, load_tolerances
from packages.core.environment.model import EnvironmentModel, environment_from_document
from packages.core.errors import AllExtinctError, DocumentError
from packages.core.model.documents import graph_document, graph_from_document, load_json
from packages.core.model.patchgraph import PatchGraph, require_valid
from packages.core.schemas import AnalysisOptions, AnalysisReport
from packages.core.simulate.branching import simulate_branching
from packages.core.simulate.lineage import estimate_lineage_frequency
from packages.core.simulate.offspring import OffspringFamily, OffspringLaw
from packages.core.simulate.rng import run_replicates
from packages.core.utils.hashing import canonical_digest
from packages.core.utils.otel import setup_tracer
from apps.metapop_cli.sweep import apply_point, parse_sweep

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CHECK_FAILED = 2

SWEEP_COLUMNS = ["parameter", "value", "criterion_value", "persists", "rho", "rho_route"]


class RunConfig(BaseModel):
    command: str
    model_path: Path
    env_path: Optional[Path] = None
    out_dir: Path = Path("out")
    config_path: Optional[Path] = None
    seed: Optional[int] = None
    generations: int = 100
    replicates: int = 200
    law: OffspringFamily = "poisson"
    population_cap: Optional[int] = None
    source: Optional[int] = None  # 1-based
    simulate: bool = False
    lyapunov_horizon: int = 10_000
    lyapunov_replicates: int = 20
    threads: Optional[int] = None
    sweep: Optional[str] = None

    def tolerances(self) -> Tolerances:
        path = self.config_path or get_settings().tolerances_path
        return load_tolerances(str(path))

    def options(self) -> AnalysisOptions:
        return AnalysisOptions(
            source=None if self.source is None else self.source - 1,
            simulate=self.simulate,
            seed=self.seed,
            generations=self.generations,
            replicates=self.replicates,
            law=OffspringLaw(family=self.law),
            population_cap=self.population_cap,
            lyapunov_horizon=self.lyapunov_horizon,
            lyapunov_replicates=self.lyapunov_replicates,
            threads=self.threads,
        )


def _input_error(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return EXIT_INPUT


def _load_documents(config: RunConfig) -> Tuple[Any, Any]:
    model_doc = load_json(config.model_path)
    env_doc = load_json(config.env_path) if config.env_path is not None else None
    return model_doc, env_doc


def _build(model_doc: Any, env_doc: Any) -> Tuple[PatchGraph, EnvironmentModel]:
    graph = graph_from_document(model_doc)
    require_valid(graph)
    env = environment_from_document(env_doc) if env_doc is not None else EnvironmentModel.constant()
    for state in range(env.num_states):
        env.state_means(graph, state)
    return graph, env


def _headline(report: AnalysisReport) -> Tuple[Optional[float], str, Optional[float], str]:
    verdict = headline_verdict(report.verdicts)
    if report.rho_spectral is not None:
        rho = report.rho_spectral
        route = "two_step_spectral" if report.environment.get("kind") == "periodic" else "spectral"
    elif report.gamma_hat is not None:
        rho, route = math.exp(report.gamma_hat), "lyapunov"
    else:
        rho, route = None, ""
    if verdict is None:
        return None, "", rho, route
    return verdict.criterion_value, verdict.persists, rho, route


def _print_report(report: AnalysisReport) -> None:
    value, persists, rho, route = _headline(report)
    print(f"criterion value: {fmt(value)} (persists: {persists or 'n/a'})")
    print(f"growth rate: {fmt(rho)} [{route or 'n/a'}]")
    failed = report.failed_checks()
    print(f"cross-checks: {len(report.cross_checks) - len(failed)}/{len(report.cross_checks)} pass")
    for e in report.errors:
        sys.stderr.write(f"warning: route {e.route} failed: {e.error_type}: {e.message}\n")


def cmd_analyze(config: RunConfig, tracer: Optional[Any] = None) -> int:
    try:
        graph, env = _build(*_load_documents(config))
        tol = config.tolerances()
        options = config.options()
    except (DocumentError, ValueError, OSError) as e:
        return _input_error(str(e))
    report = analyze(graph, env, options, tol, tracer or _tracer())
    write_bytes(config.out_dir / "report.json", to_json(report))
    write_bytes(config.out_dir / "report.csv", to_csv(report))
    _print_report(report)
    return EXIT_OK if report.all_pass else EXIT_CHECK_FAILED


def cmd_simulate(config: RunConfig) -> int:
    if config.seed is None:
        return _input_error("simulate needs --seed")
    try:
        graph, env = _build(*_load_documents(config))
        rho = generation_growth(graph, env)
        outcomes = simulate_branching(
            graph,
            env,
            OffspringLaw(family=config.law),
            generations=config.generations,
            replicates=config.replicates,
            seed=config.seed,
            start=None if config.source is None else config.source - 1,
            population_cap=config.population_cap,
            threads=config.threads,
            rho=rho,
        )
    except (DocumentError, ValueError, OSError) as e:
        return _input_error(str(e))

    summary = summarize_outcomes(outcomes)
    document: Dict[str, Any] = {
        "seed": config.seed,
        "generations": config.generations,
        "law": config.law,
        "model_digest": canonical_digest(graph_document(graph)),
        "summary": summary.model_dump(mode="json"),
        "rho": rho,
        # Z_n / rho^n at the last generation, per surviving replicate
        "normalized_final": [
            o.normalized_size[-1] for o in outcomes if o.survived and o.normalized_size
        ],
        "notes": [],
    }
    if summary.truncated:
        cap = config.population_cap or get_settings().population_cap
        document["notes"].append(
            f"{summary.truncated} replicate(s) truncated at the population cap of {cap}"
        )
    try:
        lineage = estimate_lineage_frequency(outcomes)
        document["lineage_frequency"] = lineage.frequency.tolist()
        document["lineage_radius"] = lineage.radius.tolist()
    except AllExtinctError:
        document["notes"].append("all replicates went extinct; no lineage estimate")

    write_frame(config.out_dir / "trajectories.csv", trajectories_frame(outcomes))
    write_frame(config.out_dir / "lineage.csv", lineage_frame(outcomes))
    write_bytes(config.out_dir / "summary.json", dumps(document))
    print(f"survival frequency: {fmt(summary.survival_frequency)} ({summary.survivors}/{summary.replicates})")
    for note in document["notes"]:
        print(f"note: {note}")
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    try:
        spec = parse_sweep(config.sweep or "")
        model_doc, env_doc = _load_documents(config)
        points = []
        for value in spec.grid():
            points.append((value, *_build(*apply_point(model_doc, env_doc, spec, value))))
        tol = config.tolerances()
        options = config.options()
    except (DocumentError, ValueError, OSError) as e:
        return _input_error(str(e))

    tracer = _tracer()
    reports = run_replicates(
        lambda i: analyze(points[i][1], points[i][2], options, tol, tracer),
        len(points),
        config.threads,
    )
    rows: List[Dict[str, str]] = []
    for (value, _, _), report in zip(points, reports):
        criterion, persists, rho, route = _headline(report)
        rows.append(
            {
                "parameter": spec.label,
                "value": fmt(value),
                "criterion_value": fmt(criterion),
                "persists": persists,
                "rho": fmt(rho),
                "rho_route": route,
            }
        )
    write_frame(config.out_dir / "sweep.csv", pd.DataFrame(rows, columns=SWEEP_COLUMNS))
    flips = sum(1 for a, b in zip(rows, rows[1:]) if a["persists"] != b["persists"])
    print(f"swept {spec.label} over {len(rows)} point(s); verdict changes: {flips}")
    failed = any(not r.all_pass for r in reports)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _tracer() -> Optional[Any]:
    return setup_tracer("metapop") if get_settings().trace else None
