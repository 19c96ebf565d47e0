import math

import pytest

from packages.core.analytics import analyze, from_json, to_csv, to_json
from packages.core.analytics import reports
from packages.core.analytics.reports import headline_verdict
from packages.core.environment import EnvironmentModel
from packages.core.errors import DegenerateParameterError
from packages.core.model import PatchGraph, build_two_patch
from packages.core.schemas import AnalysisOptions


def test_constant_environment_report():
    report = analyze(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    assert report.errors == []
    assert report.all_pass
    assert report.rho_spectral == pytest.approx(1.25)
    assert report.rho_variational == pytest.approx(1.25, abs=1e-8)
    assert report.depleting_rate == pytest.approx(1 / 3)
    assert report.depleting_rate_closed_form == pytest.approx(1 / 3)
    names = {c.name for c in report.cross_checks}
    assert {"criterion_vs_spectral", "log_rho_spectral_vs_variational", "rho_spectral_vs_closed_form"} <= names
    headline = headline_verdict(report.verdicts)
    assert headline.route == "first_return"
    assert headline.criterion_value == pytest.approx(4 / 3)
    assert report.survival_in_sinks_only is False


def test_periodic_report_agrees_with_closed_form():
    g = build_two_patch(M=1.0, m=1.0, p=0.5, q=0.5)
    env = EnvironmentModel.periodic({1: 10.0, 2: 0.99}, {1: 0.05, 2: 0.99})
    report = analyze(g, env)
    routes = {v.route: v for v in report.verdicts}
    assert routes["periodic_two_patch"].persists == "yes"
    assert routes["periodic_even_return"].persists == "yes"
    assert report.survival_in_sinks_only is True
    assert report.all_pass


def test_divergent_taboo_process():
    # taboo process above 1: the criterion is +inf, the report still completes
    report = analyze(build_two_patch(M=2, m=1.5, p=0.5, q=0.1))
    headline = headline_verdict(report.verdicts)
    assert math.isinf(headline.criterion_value)
    assert headline.persists == "yes"
    assert report.errors == []


def test_two_habitat_route_needs_a_true_sink():
    report = analyze(build_two_patch(M=3.0, m=1.2, p=0.5, q=0.5))
    assert report.errors == []
    assert "two_habitat" not in {v.route for v in report.verdicts}
    assert report.depleting_rate is None
    assert report.rho_spectral == pytest.approx(2.1)
    assert report.all_pass


def test_broken_route_is_recorded(monkeypatch):
    def boom(*args, **kwargs):
        raise DegenerateParameterError("closed form unavailable")

    monkeypatch.setattr(reports, "two_patch_closed_forms", boom)
    report = analyze(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    assert [(e.route, e.error_type) for e in report.errors] == [
        ("two_patch_closed_form", "DegenerateParameterError")
    ]
    assert report.rho_spectral == pytest.approx(1.25)


def test_simulation_without_seed_is_an_error_entry():
    report = analyze(build_two_patch(M=2, m=0.5, p=0.5, q=0.5), options=AnalysisOptions(simulate=True))
    assert [e.route for e in report.errors] == ["simulation"]
    assert report.simulation is None


def test_json_round_trip_keeps_infinities():
    report = analyze(build_two_patch(M=2, m=1.5, p=0.5, q=0.1))
    raw = to_json(report)
    assert b'"inf"' in raw
    back = from_json(raw)
    assert to_json(back) == raw
    assert math.isinf(headline_verdict(back.verdicts).criterion_value)


def test_csv_layout():
    report = analyze(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    lines = to_csv(report).decode().splitlines()
    assert lines[0] == "quantity,value,route,tolerance,status"
    assert any(line.startswith("rho,1.25,spectral") for line in lines)


def test_digest_tracks_the_model():
    a = analyze(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    b = analyze(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    c = analyze(build_two_patch(M=2, m=0.6, p=0.5, q=0.5))
    assert a.model_digest == b.model_digest != c.model_digest
    assert to_json(a) == to_json(b)


def test_reducible_graph_is_rejected():
    g = PatchGraph.from_arrays([1, 2], [[1.0, 0.0], [0.5, 0.5]], {1: 2.0, 2: 0.5})
    with pytest.raises(ValueError):
        analyze(g)
