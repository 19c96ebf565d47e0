import math

import numpy as np
import pytest

from packages.core.disperser import (
    depleting_rate,
    mean_sink_sojourn,
    pipeline_depleting_rate,
    pipeline_depleting_rate_limit,
    pipeline_roots,
    stationary,
    taboo_return,
    two_patch_depleting_rate,
    weighted_return_value,
)
from packages.core.errors import DegenerateParameterError
from packages.core.model import build_cycle_pipeline, build_two_patch


def _random_pipeline(rng, n):
    s, l, r = rng.dirichlet([2.0, 2.0, 2.0])
    L = float(rng.uniform())
    params = dict(
        n=n, p=float(rng.uniform(0.05, 0.95)), L=L, R=1.0 - L,
        s=float(s), l=float(l), r=float(r), M=2.0, m=float(rng.uniform(0.1, 0.95)),
    )
    return params, build_cycle_pipeline(**params)


def test_stationary_two_patch():
    u = stationary(build_two_patch(M=2, m=0.5, p=0.3, q=0.6)).u
    assert np.allclose(u, [2 / 3, 1 / 3], atol=1e-12)


def test_depleting_rate_two_patch():
    g = build_two_patch(M=2, m=0.5, p=0.5, q=0.5)
    assert depleting_rate(g, {0}) == pytest.approx(1 / 3, abs=1e-12)
    assert two_patch_depleting_rate(0.5, 0.5) == pytest.approx(1 / 3, abs=1e-15)
    assert mean_sink_sojourn(g, {0}) == pytest.approx(2.0, abs=1e-12)


def test_weighted_return_value():
    g = build_two_patch(M=2, m=0.5, p=0.5, q=0.5)
    assert weighted_return_value(g, {0}) == pytest.approx(4 / 3, abs=1e-12)


def test_weighted_return_value_diverges():
    g = build_two_patch(M=2, m=1.5, p=0.5, q=0.1)
    ret = taboo_return(g.D, g.means, {0})
    assert ret.status == "divergent"
    assert math.isinf(ret.value)
    assert ret.taboo_radius == pytest.approx(1.35)


def test_unit_means_return_one():
    rng = np.random.default_rng(3)
    for n in (1, 2, 5):
        params, _ = _random_pipeline(rng, n)
        params.update(M=1.0, m=1.0)
        g = build_cycle_pipeline(**params)
        assert weighted_return_value(g, {0}) == pytest.approx(1.0, abs=1e-10)


def test_pipeline_closed_form_matches_linear_system():
    rng = np.random.default_rng(11)
    for _ in range(8):
        for n in range(1, 51):
            params, g = _random_pipeline(rng, n)
            closed = pipeline_depleting_rate(
                n, params["L"], params["R"], params["s"], params["l"], params["r"], params["m"]
            )
            assert closed == pytest.approx(depleting_rate(g, {0}), abs=1e-10)


def test_pipeline_single_sink():
    s, m = 0.2, 0.5
    e = pipeline_depleting_rate(1, 0.5, 0.5, s, 0.4, 0.4, m)
    assert e == pytest.approx((1 - s) * m / (1 - m * s), abs=1e-12)
    assert e == pytest.approx(0.4 / 0.9, abs=1e-12)


def test_isotropic_pipeline_ignores_orientation():
    for n in (1, 3, 10, 40):
        a = pipeline_depleting_rate(n, 0.1, 0.9, 0.3, 0.35, 0.35, 0.8)
        b = pipeline_depleting_rate(n, 0.7, 0.3, 0.3, 0.35, 0.35, 0.8)
        assert a == pytest.approx(b, abs=1e-12)


def test_pipeline_limit():
    args = (0.3, 0.7, 0.2, 0.5, 0.3, 0.9)
    assert pipeline_depleting_rate(400, *args) == pytest.approx(
        pipeline_depleting_rate_limit(*args), abs=1e-10
    )
    lam, mu = pipeline_roots(0.2, 0.4, 0.4, 0.9)
    assert lam > 1 > mu
    assert pipeline_depleting_rate_limit(0.5, 0.5, 0.2, 0.4, 0.4, 0.9) == pytest.approx(1 / lam)


def test_pipeline_rejects_degenerate_input():
    with pytest.raises(DegenerateParameterError):
        pipeline_depleting_rate(3, 0.5, 0.5, 0.2, 0.8, 0.0, 0.5)
    with pytest.raises(DegenerateParameterError):
        pipeline_depleting_rate(3, 0.5, 0.6, 0.2, 0.4, 0.4, 0.5)


def test_depleting_rate_convexity_bound():
    rng = np.random.default_rng(5)
    for n in range(1, 12):
        params, g = _random_pipeline(rng, n)
        e = depleting_rate(g, {0})
        es = mean_sink_sojourn(g, {0})
        assert 0.0 <= e <= 1.0
        assert e >= 1.0 - (1.0 - params["m"]) * es - 1e-12
