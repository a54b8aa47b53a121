import numpy as np
import pytest

from impact_game.costs import cost_decomposition, expected_cost, tax_metrics
from impact_game.equilibrium import equilibrium_strategies
from impact_game.model import GameParams, ParameterError, build_matrices

# value pinned by the build; Monte Carlo agreement is checked in test_montecarlo
PINNED_COST_RHOT1_N100 = 0.7406355377272978


def random_params(rng):
    return GameParams(
        rho=float(rng.uniform(0.05, 8.0)),
        T=1.0,
        N=int(rng.integers(2, 150)),
        theta=float(rng.choice([0.0, 0.03, 0.25, 0.8])),
        x=float(rng.normal()),
        y=float(rng.normal()),
    )


def test_zero_strategies_cost_nothing():
    p = GameParams(rho=1.0, T=1.0, N=10, theta=0.4)
    z = np.zeros(11)
    assert expected_cost(p, z, z) == 0.0


def test_length_mismatch():
    p = GameParams(rho=1.0, T=1.0, N=10, theta=0.0)
    with pytest.raises(ParameterError, match="length"):
        expected_cost(p, np.ones(10), np.ones(11))


def test_quadratic_form_matches_dense(rng):
    for _ in range(20):
        p = random_params(rng)
        mats = build_matrices(p)
        xi = rng.standard_normal(p.n_points)
        eta = rng.standard_normal(p.n_points)
        dense = 0.5 * xi @ (mats.gamma + 2 * p.theta * np.eye(p.n_points)) @ xi \
            + xi @ mats.gamma_tilde @ eta
        assert expected_cost(p, xi, eta) == pytest.approx(dense, rel=1e-12, abs=1e-12)


def test_cross_term_symmetrization_identity(rng):
    # C(xi|eta) + C(eta|xi) = 1/2 xi'(G+2th)xi + 1/2 eta'(G+2th)eta + xi' Gamma eta
    for _ in range(10):
        p = random_params(rng)
        mats = build_matrices(p)
        xi = rng.standard_normal(p.n_points)
        eta = rng.standard_normal(p.n_points)
        lhs = expected_cost(p, xi, eta) + expected_cost(p, eta, xi)
        quad = mats.gamma + 2 * p.theta * np.eye(p.n_points)
        rhs = 0.5 * xi @ quad @ xi + 0.5 * eta @ quad @ eta + xi @ mats.gamma @ eta
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_decomposition_matches_quadratic_form(rng):
    for _ in range(100):
        p = random_params(rng)
        sol = equilibrium_strategies(p)
        breakdown = cost_decomposition(p)
        direct_xi = expected_cost(p, sol.xi_star, sol.eta_star)
        direct_eta = expected_cost(p, sol.eta_star, sol.xi_star)
        scale = max(abs(direct_xi), abs(direct_eta), 1e-9)
        assert abs(breakdown.cost_xi - direct_xi) <= 1e-9 * scale
        assert abs(breakdown.cost_eta - direct_eta) <= 1e-9 * scale
        assert breakdown.total_cost == pytest.approx(breakdown.cost_xi + breakdown.cost_eta)
        assert breakdown.tax_revenue >= 0.0


def test_symmetric_inventories_kill_difference_terms():
    p = GameParams(rho=1.0, T=1.0, N=30, theta=0.2, x=1.3, y=1.3)
    t = cost_decomposition(p).decomposition_terms
    assert t[1] == 0.0 and t[2] == 0.0 and t[4] == 0.0 and t[5] == 0.0
    assert t[0] != 0.0 and t[3] != 0.0


def test_antisymmetric_inventories_kill_sum_terms():
    p = GameParams(rho=1.0, T=1.0, N=30, theta=0.2, x=1.3, y=-1.3)
    t = cost_decomposition(p).decomposition_terms
    assert t[0] == 0.0 and t[1] == 0.0 and t[3] == 0.0 and t[4] == 0.0
    assert t[2] != 0.0 and t[5] != 0.0


def test_agent_swap_invariance(rng):
    for _ in range(10):
        p = random_params(rng)
        swapped = GameParams(rho=p.rho, T=p.T, N=p.N, theta=p.theta, x=p.y, y=p.x)
        assert cost_decomposition(p).cost_xi == pytest.approx(
            cost_decomposition(swapped).cost_eta, rel=1e-12, abs=1e-15)


def test_pinned_equilibrium_cost():
    p = GameParams(rho=1.0, T=1.0, N=100, theta=0.25, x=1.0, y=1.0)
    sol = equilibrium_strategies(p)
    assert expected_cost(p, sol.xi_star, sol.eta_star) == pytest.approx(
        PINNED_COST_RHOT1_N100, rel=1e-12)


def test_pinned_cost_agrees_with_simulation():
    from impact_game.montecarlo import SimConfig, simulate_cost

    p = GameParams(rho=1.0, T=1.0, N=100, theta=0.25, x=1.0, y=1.0)
    sol = equilibrium_strategies(p)
    cfg = SimConfig(n_samples=50_000, seed=20240817)
    mean_xi, _, stderr_xi, _ = simulate_cost(p, sol.xi_star, sol.eta_star, cfg)
    assert abs(mean_xi - PINNED_COST_RHOT1_N100) <= 3.0 * stderr_xi


def test_tax_revenue_zero_without_tax():
    tr, tc = tax_metrics(GameParams(rho=1.0, T=1.0, N=25, theta=0.0, x=1.0, y=0.5))
    assert tr == 0.0
    assert tc == 0.0


def test_tax_revenue_exceeds_taxation_cost_for_large_n():
    for n in (50, 100):
        tr, tc = tax_metrics(GameParams(rho=1.0, T=1.0, N=n, theta=0.25, x=1.0, y=0.5))
        assert tr > tc > 0.0


def test_tax_revenue_nondecreasing_in_theta_at_fixed_strategies():
    p = GameParams(rho=1.0, T=1.0, N=40, theta=0.1, x=1.0, y=0.5)
    sol = equilibrium_strategies(p)
    squares = float(sol.xi_star @ sol.xi_star + sol.eta_star @ sol.eta_star)
    revenues = [theta * squares for theta in (0.0, 0.1, 0.25, 1.0, 3.0)]
    assert all(b >= a for a, b in zip(revenues, revenues[1:]))


def test_taxation_cost_is_total_cost_difference():
    p = GameParams(rho=1.0, T=1.0, N=60, theta=0.25, x=1.0, y=0.5)
    p0 = GameParams(rho=1.0, T=1.0, N=60, theta=0.0, x=1.0, y=0.5)
    breakdown = cost_decomposition(p)
    base = cost_decomposition(p0)
    assert breakdown.taxation_cost == pytest.approx(
        breakdown.total_cost - base.total_cost, rel=1e-12, abs=1e-15)
