"""
Analysis orchestration: run every route that applies to the environment kind,
collect the numbers into an AnalysisReport and compare the redundant routes.

A failing route never aborts the analysis; its exception is recorded as a
RouteError and the remaining routes still run.
"""
from __future__ import annotations
from typing import Any, Callable, List, Optional, TypeVar
import math

import numpy as np

from packages.core.analytics.aggregator import summarize_outcomes
from packages.core.config import DEFAULT_TOLERANCES, Tolerances, get_logger, get_settings
from packages.core.disperser.pipeline import two_patch_depleting_rate
from packages.core.environment.bounds import markov_env_lower_bound_graph
from packages.core.environment.matrices import two_step_array
from packages.core.environment.model import EnvironmentModel, environment_document
from packages.core.growth.closed_forms import periodic_two_patch_closed_forms, two_patch_closed_forms
from packages.core.growth.periodic import periodic_growth
from packages.core.growth.spectral import perron, spectral_from_matrix
from packages.core.growth.variational import growth_variational
from packages.core.model.documents import graph_document
from packages.core.model.patchgraph import PatchGraph, reference_source, require_valid
from packages.core.persistence.criteria import (
    criterion_general,
    criterion_sigma_form,
    criterion_two_habitat_graph,
)
from packages.core.persistence.periodic import (
    criterion_periodic_general,
    criterion_periodic_two_patch,
    isolated_growth,
    survival_in_sinks_only,
)
from packages.core.persistence.verdict import PersistenceVerdict, classify, make_verdict
from packages.core.schemas import AnalysisOptions, AnalysisReport, CheckStatus, CrossCheck, RouteError
from packages.core.simulate.branching import simulate_branching
from packages.core.simulate.lineage import estimate_lineage_frequency
from packages.core.simulate.lyapunov import estimate_lyapunov
from packages.core.utils.hashing import canonical_digest
from packages.core.utils.otel import span

logger = get_logger(__name__)

T = TypeVar("T")

# perturbation applied to the variational log growth rate by the test hook
FAULT_SHIFT = 1e-3
# simulated quantities disagreeing beyond this many standard errors are flagged indeterminate
SIM_SIGMAS = 5.0


class _Run:
    """Mutable state of one analysis: the report under construction plus helpers."""

    def __init__(self, report: AnalysisReport, tol: Tolerances, tracer: Optional[Any]) -> None:
        self.report = report
        self.tol = tol
        self.tracer = tracer

    def route(self, name: str, fn: Callable[[], T]) -> Optional[T]:
        with span(self.tracer, f"route.{name}"):
            try:
                return fn()
            except Exception as exc:  # recorded, never raised
                logger.warning("route %s failed: %s", name, exc)
                self.report.errors.append(
                    RouteError(route=name, error_type=type(exc).__name__, message=str(exc))
                )
                return None

    def verdict(self, v: Optional[PersistenceVerdict]) -> Optional[PersistenceVerdict]:
        if v is not None:
            self.report.verdicts.append(v)
        return v

    def agreement(
        self, name: str, left_route: str, right_route: str, left: float, right: float, tolerance: float
    ) -> None:
        delta = abs(left - right)
        status: CheckStatus = "pass" if delta <= tolerance else "fail"
        self.report.cross_checks.append(
            CrossCheck(
                name=name, left_route=left_route, right_route=right_route,
                left=left, right=right, delta=delta, tolerance=tolerance, status=status,
            )
        )

    def same_side(
        self, name: str, left_route: str, right_route: str, left: float, right: float
    ) -> None:
        """Both values on the same side of 1; undecided when either sits on the boundary."""
        a, b = classify(left, self.tol.boundary), classify(right, self.tol.boundary)
        if "critical-indeterminate" in (a, b):
            status: CheckStatus = "indeterminate"
        else:
            status = "pass" if a == b else "fail"
        self.report.cross_checks.append(
            CrossCheck(
                name=name, left_route=left_route, right_route=right_route,
                left=left, right=right, delta=0.0 if a == b else 1.0,
                tolerance=self.tol.boundary, status=status,
            )
        )

    def statistical(
        self, name: str, left_route: str, right_route: str, left: float, right: float, stderr: float
    ) -> None:
        delta = abs(left - right)
        tolerance = SIM_SIGMAS * stderr + self.tol.boundary
        status: CheckStatus = "pass" if delta <= tolerance else "indeterminate"
        self.report.cross_checks.append(
            CrossCheck(
                name=name, left_route=left_route, right_route=right_route,
                left=left, right=right, delta=delta, tolerance=tolerance, status=status,
            )
        )


def _two_habitat(graph: PatchGraph, src: int) -> bool:
    """One source habitat with M > 1, every other patch sharing a single mean m <= 1."""
    sinks = [i for i in range(graph.num_patches) if graph.habitat_of[i] != graph.habitat_of[src]]
    if not sinks or float(np.ptp(graph.means[sinks])) > 1e-12:
        return False
    return float(graph.means[sinks[0]]) <= 1.0 < float(graph.means[src])


def _constant_routes(run: _Run, graph: PatchGraph, src: int) -> None:
    report, tol = run.report, run.tol
    fault = get_settings().test_fault == "variational"

    spectral = run.route("spectral", lambda: perron(graph, tol))
    if spectral is not None:
        report.rho_spectral = spectral.rho
        report.phi_spectral = spectral.phi.tolist()

    variational = run.route("variational", lambda: growth_variational(graph, tol))
    if variational is not None:
        log_rho = variational.log_rho + (FAULT_SHIFT if fault else 0.0)
        report.rho_variational = math.exp(log_rho)
        report.phi_variational = variational.phi.tolist()
        run.agreement(
            "variational_tilted_vs_ascent", "variational_tilted", "variational_ascent",
            log_rho, variational.log_rho_ascent, tol.route_agreement,
        )
        if spectral is not None:
            run.agreement(
                "log_rho_spectral_vs_variational", "spectral", "variational",
                math.log(spectral.rho), log_rho, tol.route_agreement,
            )
            run.agreement(
                "phi_spectral_vs_variational", "spectral", "variational",
                0.0, float(np.max(np.abs(spectral.phi - variational.phi))), tol.phi_agreement,
            )

    general = run.verdict(run.route("first_return", lambda: criterion_general(graph, src, tol)))
    if general is not None and spectral is not None:
        run.same_side(
            "criterion_vs_spectral", "first_return", "spectral", general.criterion_value, spectral.rho
        )

    if _two_habitat(graph, src):
        two = run.verdict(run.route("two_habitat", lambda: criterion_two_habitat_graph(graph, src, tol)))
        if two is not None:
            d = two.diagnostics
            report.depleting_rate = float(d["e"])
            report.mean_sink_sojourn = float(d["mean_sojourn"])
            sigma = run.verdict(
                run.route(
                    "sigma_form",
                    lambda: criterion_sigma_form(float(d["M"]), float(d["p"]), float(d["e"]), tol),
                )
            )
            if general is not None:
                run.same_side(
                    "two_habitat_vs_first_return", "two_habitat", "first_return",
                    two.criterion_value, general.criterion_value,
                )
            if sigma is not None:
                run.same_side(
                    "sigma_form_vs_two_habitat", "sigma_form", "two_habitat",
                    sigma.criterion_value, two.criterion_value,
                )
            if graph.num_patches == 2:
                sink = 1 - src
                closed = run.route(
                    "depleting_closed_form",
                    lambda: two_patch_depleting_rate(float(d["m"]), float(graph.D[sink, src])),
                )
                if closed is not None:
                    report.depleting_rate_closed_form = closed
                    run.agreement(
                        "depleting_rate_linear_vs_closed_form", "linear_system", "closed_form",
                        report.depleting_rate, closed, tol.linear_residual,
                    )

    if graph.num_patches == 2 and spectral is not None:
        d = graph.D
        if abs(d[0, 1] + d[1, 0] - 1.0) <= 1e-12:
            sink = 1 - src
            q = float(d[sink, src])
            forms = run.route(
                "two_patch_closed_form",
                lambda: two_patch_closed_forms(float(graph.means[src]), float(graph.means[sink]), q),
            )
            if forms is not None:
                run.agreement(
                    "rho_spectral_vs_closed_form", "spectral", "closed_form",
                    spectral.rho, forms.rho, tol.route_agreement,
                )


def _periodic_routes(run: _Run, graph: PatchGraph, env: EnvironmentModel, src: int) -> None:
    report, tol = run.report, run.tol
    growth = run.route("periodic_growth", lambda: periodic_growth(graph, env, tol))
    if growth is not None:
        report.rho_spectral = growth.rho
        report.rho_variational = growth.rho_variational
        report.phi_variational = growth.phi_patch.tolist()
        report.phi_lineage = growth.phi_lineage.tolist()
        run.agreement(
            "log_rho_two_step_vs_pairs", "two_step_spectral", "pair_variational",
            math.log(growth.rho), math.log(growth.rho_variational), tol.route_agreement,
        )

    general = run.verdict(
        run.route("periodic_even_return", lambda: criterion_periodic_general(graph, env, src, tol))
    )
    if general is not None and growth is not None:
        run.same_side(
            "periodic_criterion_vs_spectral", "periodic_even_return", "two_step_spectral",
            general.criterion_value, growth.rho,
        )

    if graph.num_patches == 2:
        sink = 1 - src
        e1, e2 = env.state_means(graph, 0), env.state_means(graph, 1)
        d = graph.D
        p, q = float(d[src, sink]), float(d[sink, src])
        two = run.verdict(
            run.route(
                "periodic_two_patch",
                lambda: criterion_periodic_two_patch(
                    float(e1[src]), float(e2[src]), float(e1[sink]), float(e2[sink]), p, q, tol
                ),
            )
        )
        if two is not None and general is not None:
            run.same_side(
                "periodic_two_patch_vs_even_return", "periodic_two_patch", "periodic_even_return",
                two.criterion_value, general.criterion_value,
            )
        if growth is not None and abs(p + q - 1.0) <= 1e-12:
            forms = run.route(
                "periodic_two_patch_closed_form",
                lambda: periodic_two_patch_closed_forms(
                    float(e1[src]), float(e2[src]), float(e1[sink]), float(e2[sink]), q
                ),
            )
            if forms is not None:
                run.agreement(
                    "rho_two_step_vs_closed_form", "two_step_spectral", "closed_form",
                    growth.rho, forms.rho, tol.route_agreement,
                )


def _markov_routes(
    run: _Run, graph: PatchGraph, env: EnvironmentModel, src: int, options: AnalysisOptions
) -> None:
    report, tol = run.report, run.tol
    if graph.num_patches == 2:
        report.markov_lower_bound = run.route(
            "markov_lower_bound", lambda: markov_env_lower_bound_graph(graph, env, src)
        )
    estimate = run.route(
        "lyapunov",
        lambda: estimate_lyapunov(
            graph, env, options.lyapunov_horizon, options.lyapunov_replicates,
            options.seed or 0, options.threads,
        ),
    )
    if estimate is None:
        return
    report.gamma_hat = estimate.gamma
    report.gamma_stderr = estimate.stderr
    run.verdict(
        make_verdict(
            math.exp(estimate.gamma), route="lyapunov",
            diagnostics={"gamma": estimate.gamma, "stderr": estimate.stderr}, band=tol.boundary,
        )
    )
    if report.markov_lower_bound is not None:
        bound = report.markov_lower_bound
        tolerance = 3.0 * estimate.stderr + tol.boundary
        shortfall = max(0.0, bound - estimate.gamma)
        report.cross_checks.append(
            CrossCheck(
                name="lower_bound_below_gamma", left_route="markov_lower_bound", right_route="lyapunov",
                left=bound, right=estimate.gamma, delta=shortfall, tolerance=tolerance,
                status="pass" if shortfall <= tolerance else "fail",
            )
        )


def _simulation_routes(
    run: _Run, graph: PatchGraph, env: EnvironmentModel, src: int, options: AnalysisOptions
) -> None:
    report = run.report
    if options.seed is None:
        report.errors.append(
            RouteError(route="simulation", error_type="DegenerateParameterError", message="simulation needs a seed")
        )
        return
    outcomes = run.route(
        "simulation",
        lambda: simulate_branching(
            graph, env, options.law, options.generations, options.replicates, options.seed,
            start=src, population_cap=options.population_cap, threads=options.threads,
            rho=report.rho_spectral,
        ),
    )
    if not outcomes:
        return
    summary = summarize_outcomes(outcomes)
    report.simulation = summary
    if summary.window_growth is not None:
        report.rho_simulated = math.exp(summary.window_growth)
        if report.rho_spectral is not None and summary.window_growth_stderr:
            run.statistical(
                "log_rho_simulated_vs_spectral", "simulation", "spectral",
                summary.window_growth, math.log(report.rho_spectral), summary.window_growth_stderr,
            )
    if summary.survivors:
        lineage = run.route("lineage", lambda: estimate_lineage_frequency(outcomes))
        if lineage is not None:
            report.phi_simulated = lineage.frequency.tolist()
            report.phi_simulated_radius = lineage.radius.tolist()


def analyze(
    graph: PatchGraph,
    env: Optional[EnvironmentModel] = None,
    options: Optional[AnalysisOptions] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    tracer: Optional[Any] = None,
) -> AnalysisReport:
    require_valid(graph)
    env = env or EnvironmentModel.constant()
    options = options or AnalysisOptions()
    model_doc = graph_document(graph)
    env_doc = environment_document(env)
    report = AnalysisReport(
        model=model_doc,
        environment=env_doc,
        model_digest=canonical_digest({"model": model_doc, "environment": env_doc}),
    )
    run = _Run(report, tol, tracer)
    first_means = env.state_means(graph, 0)
    src = reference_source(graph, first_means) if options.source is None else options.source

    with span(tracer, "analyze", kind=env.kind, patches=graph.num_patches):
        if env.kind == "constant":
            constant_graph = graph.with_means(env.means[0]) if env.means else graph
            _constant_routes(run, constant_graph, src)
        elif env.kind == "periodic":
            _periodic_routes(run, graph, env, src)
        else:
            _markov_routes(run, graph, env, src, options)

        growth = run.route("isolated_growth", lambda: isolated_growth(graph, env))
        if growth is not None:
            report.isolated_growth = growth.tolist()
            headline = headline_verdict(report.verdicts)
            if headline is not None:
                report.survival_in_sinks_only = survival_in_sinks_only(graph, env, headline)

        if options.simulate:
            _simulation_routes(run, graph, env, src, options)

    failed: List[str] = [c.name for c in report.failed_checks()]
    if failed:
        logger.warning("cross-checks failed: %s", ", ".join(failed))
    return report


def headline_verdict(verdicts: List[PersistenceVerdict]) -> Optional[PersistenceVerdict]:
    """The verdict the report leads with: the exact criterion of the environment kind."""
    for route in ("first_return", "periodic_even_return", "lyapunov"):
        for v in verdicts:
            if v.route == route:
                return v
    return None


def generation_growth(
    graph: PatchGraph, env: Optional[EnvironmentModel] = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> Optional[float]:
    """Mean growth per generation, used to normalize simulated sizes; None in a Markov environment."""
    env = env or EnvironmentModel.constant()
    if env.kind == "constant":
        return perron(graph.with_means(env.means[0]) if env.means else graph, tol).rho
    if env.kind == "periodic":
        return math.sqrt(spectral_from_matrix(two_step_array(graph, env), tol).rho)
    return None
