import math

import numpy as np
import pytest

from packages.core.environment import EnvironmentModel, two_step_array
from packages.core.errors import DegenerateParameterError
from packages.core.growth import perron
from packages.core.model import PatchGraph, build_cycle_pipeline, build_two_patch
from packages.core.numerics import spectral_radius
from packages.core.persistence import (
    classify,
    criterion_general,
    criterion_periodic_general,
    criterion_periodic_two_patch,
    criterion_sigma_form,
    criterion_two_habitat,
    criterion_two_habitat_graph,
    isolated_growth,
    sufficient_mean_sojourn,
    survival_in_sinks_only,
)


def _random_graph(rng):
    k = int(rng.integers(2, 11))
    d = rng.uniform(size=(k, k)) * (rng.uniform(size=(k, k)) < 0.6)
    np.fill_diagonal(d, rng.uniform(0.05, 1.0, size=k))
    # a cycle through every patch keeps the chain irreducible
    d[np.arange(k), (np.arange(k) + 1) % k] += rng.uniform(0.05, 1.0, size=k)
    d /= d.sum(axis=1, keepdims=True)
    habitats = list(range(1, k + 1))
    means = {h: float(rng.uniform(0.0, 2.5)) for h in habitats}
    return PatchGraph.from_arrays(habitats, d, means)


def test_general_criterion_two_patch():
    v = criterion_general(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    assert v.criterion_value == pytest.approx(4 / 3, abs=1e-12)
    assert v.persists == "yes"
    assert v.route == "first_return"


def test_leaky_source_does_not_persist():
    v = criterion_general(build_two_patch(M=1.1, m=0.01, p=0.99, q=0.01))
    assert v.criterion_value < 1
    assert v.persists == "no"


def test_unit_means_are_indeterminate():
    g = build_cycle_pipeline(n=3, p=0.3, L=0.5, R=0.5, s=0.2, l=0.4, r=0.4, M=1.0, m=1.0)
    assert criterion_general(g).persists == "critical-indeterminate"
    assert classify(1.0 + 1e-12) == "critical-indeterminate"


def test_criterion_sign_matches_growth_rate():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(1000):
        g = _random_graph(rng)
        rho = perron(g).rho
        value = criterion_general(g).criterion_value
        if abs(value - 1.0) <= 1e-6 or abs(rho - 1.0) <= 1e-6:
            continue
        assert (value > 1.0) == (rho > 1.0)
        checked += 1
    assert checked > 900


def test_two_habitat_forms():
    v = criterion_two_habitat(M=2, m=0.5, p=0.5, e=1 / 3)
    assert v.criterion_value == pytest.approx(4 / 3)
    assert v.persists == "yes"
    assert criterion_two_habitat(M=0.9, m=0.5, p=0.5, e=0.0).persists == "no"
    assert criterion_two_habitat(M=1.8, m=0.5, p=0.5, e=0.0).persists == "no"


def test_two_habitat_graph_diagnostics():
    v = criterion_two_habitat_graph(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    assert v.criterion_value == pytest.approx(4 / 3, abs=1e-12)
    assert v.diagnostics["e"] == pytest.approx(1 / 3)
    assert v.diagnostics["mean_sojourn"] == pytest.approx(2.0)
    assert "sufficient_mean_sojourn" in v.diagnostics


def test_sigma_form_agrees_with_two_habitat():
    rng = np.random.default_rng(8)
    for _ in range(500):
        M, p, e = rng.uniform(0, 4), rng.uniform(0.01, 0.99), rng.uniform(0, 1)
        a = criterion_two_habitat(M, 0.5, p, e)
        b = criterion_sigma_form(M, p, e)
        if abs(a.criterion_value - 1.0) > 1e-6:
            assert a.persists == b.persists
    assert math.isinf(criterion_sigma_form(M=3, p=0.5, e=0.1).criterion_value)


def test_sufficient_mean_sojourn():
    assert sufficient_mean_sojourn(M=2, m=0.5, p=0.5, ES=2) is False
    assert sufficient_mean_sojourn(M=2, m=0.5, p=0.5, ES=1.5) is True
    with pytest.raises(DegenerateParameterError):
        sufficient_mean_sojourn(M=0.9, m=0.5, p=0.5, ES=1)


def test_periodic_two_patch_remark():
    v = criterion_periodic_two_patch(M1=10, M2=0.05, m1=0.99, m2=0.99, p=0.5, q=0.5)
    assert v.diagnostics["lhs"] == pytest.approx(2.857, abs=1e-3)
    assert v.diagnostics["rhs"] == 1.0
    assert v.persists == "yes"


def test_periodic_symmetric_dispersal_reduces():
    # p = q = 1/2, m1 = m2 = m: persistence iff M1 M2 + m (M1 + M2) + m^2 > 4
    for M1, M2, m in ((3.0, 0.5, 0.6), (3.0, 0.5, 0.7), (1.5, 1.5, 0.2), (4.0, 0.1, 0.9)):
        v = criterion_periodic_two_patch(M1, M2, m, m, 0.5, 0.5)
        expected = M1 * M2 + m * (M1 + M2) + m * m > 4
        assert (v.persists == "yes") == expected


def test_periodic_two_patch_matches_two_step_root():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        M1, M2, m1, m2 = rng.uniform(0, 3, size=4)
        p, q = rng.uniform(0.01, 0.99, size=2)
        g = build_two_patch(M=1.0, m=1.0, p=p, q=q)
        env = EnvironmentModel.periodic({1: M1, 2: m1}, {1: M2, 2: m2})
        root = spectral_radius(two_step_array(g, env))
        v = criterion_periodic_two_patch(M1, M2, m1, m2, p, q)
        if abs(root - 1.0) > 1e-6 and abs(v.criterion_value - 1.0) > 1e-6:
            assert (v.persists == "yes") == (root > 1.0)


def test_survival_in_sinks_only():
    g = build_two_patch(M=1.0, m=1.0, p=0.5, q=0.5)
    env = EnvironmentModel.periodic({1: 10.0, 2: 0.99}, {1: 0.05, 2: 0.99})
    v = criterion_periodic_general(g, env)
    assert v.persists == "yes"
    assert v.route == "periodic_even_return"
    assert np.all(isolated_growth(g, env) <= 1.0)
    assert survival_in_sinks_only(g, env, v)
    assert criterion_periodic_two_patch(10, 0.05, 0.99, 0.99, 0.5, 0.5).persists == v.persists


def test_even_return_agrees_with_constant_environment():
    g = build_cycle_pipeline(n=3, p=0.3, L=0.5, R=0.5, s=0.2, l=0.4, r=0.4, M=2.0, m=0.5)
    env = EnvironmentModel.periodic(g.mean_offspring, g.mean_offspring)
    assert criterion_periodic_general(g, env).persists == criterion_general(g).persists


def test_short_mean_sojourn_implies_persistence():
    rng = np.random.default_rng(31)
    hits = 0
    for _ in range(300):
        s = float(rng.uniform(0.05, 0.5))
        l = float(rng.uniform(0.05, 0.95 - s))
        L = float(rng.uniform(0.05, 0.95))
        g = build_cycle_pipeline(
            n=int(rng.integers(1, 8)), p=float(rng.uniform(0.05, 0.95)), L=L, R=1.0 - L,
            s=s, l=l, r=1.0 - s - l, M=float(rng.uniform(1.05, 4.0)), m=float(rng.uniform(0.05, 0.95)),
        )
        v = criterion_two_habitat_graph(g, 0)
        if v.diagnostics["sufficient_mean_sojourn"]:
            hits += 1
            assert v.persists == "yes"
    assert hits > 20
