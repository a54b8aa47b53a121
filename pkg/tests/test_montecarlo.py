import math

import numpy as np
import pytest

from impact_game.costs import expected_cost
from impact_game.equilibrium import equilibrium_strategies
from impact_game.model import GameParams, ParameterError
from impact_game.montecarlo import SimConfig, simulate_cost, simulate_samples


@pytest.mark.parametrize("kwargs", [
    dict(n_samples=0, seed=1),
    dict(n_samples=10, seed=-2),
    dict(n_samples=10, seed=1, price_model="geometric"),
    dict(n_samples=10, seed=1, walk_scale=-0.5),
])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        SimConfig(**kwargs)


def test_inactive_agent_has_zero_cost():
    p = GameParams(rho=1.0, T=1.0, N=12, theta=0.3, x=0.0, y=1.0)
    eta = equilibrium_strategies(p).eta_star
    xi = np.zeros(p.n_points)
    xi_costs, _ = simulate_samples(p, xi, eta, SimConfig(n_samples=500, seed=3))
    assert np.all(xi_costs == 0.0)


def test_priority_coin_cancels_in_the_total():
    # eps and 1-eps split the same cross cost, so the per-sample total is
    # deterministic under the zero price model
    p = GameParams(rho=1.0, T=1.0, N=9, theta=0.1, x=1.0, y=-0.4)
    sol = equilibrium_strategies(p)
    xi_costs, eta_costs = simulate_samples(p, sol.xi_star, sol.eta_star,
                                           SimConfig(n_samples=800, seed=11))
    totals = xi_costs + eta_costs
    assert np.max(np.abs(totals - totals[0])) < 1e-12


def test_reproducibility_bitwise():
    p = GameParams(rho=1.0, T=1.0, N=20, theta=0.25, x=1.0, y=0.5)
    sol = equilibrium_strategies(p)
    cfg = SimConfig(n_samples=40000, seed=77, price_model="random_walk", walk_scale=0.2)
    a = simulate_samples(p, sol.xi_star, sol.eta_star, cfg)
    b = simulate_samples(p, sol.xi_star, sol.eta_star, cfg)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert simulate_cost(p, sol.xi_star, sol.eta_star, cfg) == \
        simulate_cost(p, sol.xi_star, sol.eta_star, cfg)


def test_sample_mean_matches_formula_both_price_models():
    p = GameParams(rho=1.0, T=1.0, N=50, theta=0.25, x=1.0, y=0.5)
    sol = equilibrium_strategies(p)
    target_xi = expected_cost(p, sol.xi_star, sol.eta_star)
    target_eta = expected_cost(p, sol.eta_star, sol.xi_star)
    for model, scale in (("constant_zero", 0.0), ("random_walk", 0.1)):
        cfg = SimConfig(n_samples=30000, seed=20240817, price_model=model, walk_scale=scale)
        mean_xi, mean_eta, se_xi, se_eta = simulate_cost(p, sol.xi_star, sol.eta_star, cfg)
        assert abs(mean_xi - target_xi) <= 3.0 * se_xi
        assert abs(mean_eta - target_eta) <= 3.0 * se_eta


def test_martingale_price_terms_cancel_in_the_mean():
    p = GameParams(rho=1.0, T=1.0, N=30, theta=0.0, x=1.0, y=0.5)
    sol = equilibrium_strategies(p)
    flat = simulate_cost(p, sol.xi_star, sol.eta_star,
                         SimConfig(n_samples=30000, seed=5, price_model="constant_zero"))
    walk = simulate_cost(p, sol.xi_star, sol.eta_star,
                         SimConfig(n_samples=30000, seed=5, price_model="random_walk",
                                   walk_scale=0.2))
    joint = math.hypot(flat[2], walk[2])
    assert abs(flat[0] - walk[0]) <= 3.0 * joint
    joint = math.hypot(flat[3], walk[3])
    assert abs(flat[1] - walk[1]) <= 3.0 * joint


def test_single_sample_stderr_is_nan():
    p = GameParams(rho=1.0, T=1.0, N=5, theta=0.0, x=1.0, y=0.0)
    sol = equilibrium_strategies(p)
    out = simulate_cost(p, sol.xi_star, sol.eta_star, SimConfig(n_samples=1, seed=0))
    assert math.isnan(out[2]) and math.isnan(out[3])
