import math

import numpy as np
import pytest

from packages.core.disperser import stationary
from packages.core.environment import EnvironmentModel
from packages.core.growth import (
    growth_variational,
    periodic_growth,
    periodic_two_patch_closed_forms,
    perron,
    rate_function,
    reproductive_payoff,
    two_patch_closed_forms,
)
from packages.core.growth.rate_function import identity_residual
from packages.core.growth.variational import tilted_route
from packages.core.model import PatchGraph, build_chessboard, build_cycle_pipeline, build_two_patch


def test_two_patch_spectral_closed_form():
    s = perron(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    assert s.rho == pytest.approx(1.25, abs=1e-12)
    assert np.allclose(s.phi, [0.8, 0.2], atol=1e-12)
    forms = two_patch_closed_forms(M=2, m=0.5, q=0.5)
    assert forms.rho == pytest.approx(1.25)
    assert np.allclose(forms.phi, [0.8, 0.2])


def test_two_patch_variational_closed_form():
    v = growth_variational(build_two_patch(M=2, m=0.5, p=0.5, q=0.5))
    assert math.exp(v.log_rho) == pytest.approx(1.25, abs=1e-8)
    assert np.max(np.abs(v.phi - [0.8, 0.2])) <= 1e-8
    assert v.consistent
    assert v.agreement <= 1e-6


def test_rate_function_vanishes_at_stationary():
    g = build_two_patch(M=2, m=0.5, p=0.3, q=0.6)
    u = stationary(g).u
    assert rate_function(g, u).I == pytest.approx(0.0, abs=1e-10)


def test_rate_function_iid_positions():
    g = build_two_patch(M=2, m=0.5, p=0.6, q=0.4)
    forms = two_patch_closed_forms(M=2, m=0.5, q=0.4)
    for f in ([0.8, 0.2], [0.3, 0.7], [0.5, 0.5]):
        assert rate_function(g, f).I == pytest.approx(forms.rate(f), abs=1e-10)


def test_rate_function_on_the_boundary():
    g = build_two_patch(M=2, m=0.5, p=0.3, q=0.6)
    value = rate_function(g, [1.0, 0.0])
    assert value.I == pytest.approx(-math.log(0.7), abs=1e-12)
    assert not value.attained


def test_rate_function_is_convex_and_nonnegative():
    g = build_cycle_pipeline(n=3, p=0.3, L=0.4, R=0.6, s=0.2, l=0.5, r=0.3, M=2.0, m=0.5)
    rng = np.random.default_rng(4)
    for _ in range(20):
        f, h = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        If, Ih = rate_function(g, f).I, rate_function(g, h).I
        mid = rate_function(g, 0.5 * (f + h))
        assert mid.I >= 0.0
        assert mid.I <= 0.5 * (If + Ih) + 1e-10
        assert mid.residual <= 1e-9


def test_reproductive_payoff():
    g = build_two_patch(M=2, m=0.5, p=0.5, q=0.5)
    assert reproductive_payoff(g, [0.8, 0.2]) == pytest.approx(0.6 * math.log(2))
    assert reproductive_payoff(g, [1.0, 0.0]) == pytest.approx(math.log(2))
    sterile = build_two_patch(M=2, m=0.0, p=0.5, q=0.5)
    assert reproductive_payoff(sterile, [0.5, 0.5]) == -math.inf


def test_variational_matches_spectral_on_pipelines():
    for n, M, m in ((2, 2.0, 0.5), (3, 1.2, 0.8), (5, 3.0, 0.3)):
        g = build_cycle_pipeline(n=n, p=0.3, L=0.4, R=0.6, s=0.2, l=0.5, r=0.3, M=M, m=m)
        v = growth_variational(g)
        assert v.log_rho == pytest.approx(math.log(perron(g).rho), abs=1e-6)
        assert v.consistent
        u = rate_function(g, v.phi)
        assert identity_residual(g.D, v.phi, u.maximizer_u) <= 1e-9


def test_equal_means_give_stationary_occupancy():
    g = build_cycle_pipeline(n=3, p=0.3, L=0.4, R=0.6, s=0.2, l=0.5, r=0.3, M=1.5, m=1.5)
    v = growth_variational(g)
    assert np.allclose(v.phi, stationary(g).u, atol=1e-8)
    assert math.exp(v.log_rho) == pytest.approx(1.5, abs=1e-8)


def test_growth_scales_with_means():
    g = build_chessboard(M=1.6, m=0.6)
    scaled = g.with_means({1: 3.2, 2: 1.2})
    a, b = perron(g), perron(scaled)
    assert b.rho == pytest.approx(2.0 * a.rho)
    assert np.allclose(a.phi, b.phi, atol=1e-10)


def test_periodic_growth_closed_form():
    M1, M2, m1, m2, q = 3.0, 0.5, 0.8, 1.2, 0.4
    g = build_two_patch(M=1.0, m=1.0, p=1.0 - q, q=q)
    env = EnvironmentModel.periodic({1: M1, 2: m1}, {1: M2, 2: m2})
    growth = periodic_growth(g, env)
    forms = periodic_two_patch_closed_forms(M1, M2, m1, m2, q)
    expected = math.sqrt((q * M1 + (1 - q) * m1) * (q * M2 + (1 - q) * m2))
    assert forms.rho == pytest.approx(expected)
    assert growth.rho == pytest.approx(expected, abs=1e-8)
    assert growth.rho_variational == pytest.approx(expected, abs=1e-6)
    assert growth.edges == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert np.allclose(growth.phi_pairs, forms.phi_pairs.ravel(), atol=1e-8)
    assert np.allclose(growth.phi_patch, forms.phi_pairs.sum(axis=0), atol=1e-8)
    assert growth.phi_lineage.sum() == pytest.approx(1.0)


def test_periodic_growth_without_seasons():
    g = build_cycle_pipeline(n=2, p=0.3, L=0.5, R=0.5, s=0.2, l=0.4, r=0.4, M=2.0, m=0.5)
    env = EnvironmentModel.periodic(g.mean_offspring, g.mean_offspring)
    assert periodic_growth(g, env).rho == pytest.approx(perron(g).rho, abs=1e-10)


def _random_graph(rng):
    k = int(rng.integers(3, 9))
    d = rng.dirichlet(np.ones(k), size=k)
    means = {h: float(rng.uniform(0.2, 3.0)) for h in range(1, k + 1)}
    return PatchGraph.from_arrays(list(range(1, k + 1)), d, means)


def test_ascent_converges_on_slowly_mixing_pipeline():
    g = build_cycle_pipeline(n=7, p=0.1, L=0.5, R=0.5, s=0.8, l=0.1, r=0.1, M=1.3, m=0.9)
    v = growth_variational(g)
    assert v.consistent
    assert v.log_rho_ascent == pytest.approx(math.log(perron(g).rho), abs=1e-6)
    assert v.agreement <= 1e-6


def test_tilted_phi_matches_spectral_phi():
    rng = np.random.default_rng(8)
    graphs = [
        build_cycle_pipeline(n=n, p=0.3, L=0.4, R=0.6, s=0.2, l=0.5, r=0.3, M=2.0, m=0.5)
        for n in (2, 5, 9)
    ]
    graphs += [_random_graph(rng) for _ in range(30)]
    for g in graphs:
        log_rho, phi, _ = tilted_route(g.D, g.means)
        s = perron(g)
        assert log_rho == pytest.approx(math.log(s.rho), abs=1e-9)
        assert np.max(np.abs(phi - s.phi)) <= 1e-8


def test_phi_departs_from_stationary_when_means_differ():
    rng = np.random.default_rng(12)
    for _ in range(50):
        g = _random_graph(rng)
        assert np.ptp(g.means) > 1e-6
        assert np.max(np.abs(perron(g).phi - stationary(g).u)) > 1e-6
