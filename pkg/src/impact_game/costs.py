"""Expected equilibrium costs, their closed decomposition, and tax metrics.

For deterministic strategies the martingale price terms cancel in
expectation and the expected cost of agent 1 is the quadratic form

    E[cost(xi | eta)] = 1/2 xi^T (Gamma + 2*theta*Id) xi + xi^T Gamma_tilde eta.

At equilibrium this collapses to a six-term expression in the scalars
1^T nu, 1^T omega and the three quadratic forms nu^T Gt nu,
omega^T (Gt - Gt^T) nu, omega^T Gt omega, which is what
:func:`cost_decomposition` evaluates.  Final reductions use exact
compensated summation (math.fsum): at theta == 0 the strategies alternate
in sign and naive accumulation loses digits for large N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .equilibrium import equilibrium_strategies, solve_nu, solve_omega
from .model import GameParams, _check_length, gamma_apply, gamma_tilde_apply


@dataclass(frozen=True)
class CostBreakdown:
    """Equilibrium cost decomposition and tax metrics at one parameter set.

    ``decomposition_terms`` holds the six bracketed terms whose sum, divided
    by 8, equals agent 1's expected cost; ``tax_revenue`` is
    ``theta*(xi^T xi + eta^T eta)`` and ``taxation_cost`` is the total-cost
    difference against the untaxed (theta == 0) game at otherwise identical
    parameters.
    """

    cost_xi: float
    cost_eta: float
    total_cost: float
    tax_revenue: float
    taxation_cost: float
    decomposition_terms: tuple[float, float, float, float, float, float]


def _fsum_dot(a: np.ndarray, b: np.ndarray) -> float:
    return math.fsum((a * b).tolist())


def expected_cost(params: GameParams, xi: np.ndarray, eta: np.ndarray) -> float:
    """Expected cost of the xi-agent given eta (any admissible vectors)."""
    xi = _check_length(params, xi, "xi")
    eta = _check_length(params, eta, "eta")
    integrand = 0.5 * gamma_apply(params, xi) + params.theta * xi + gamma_tilde_apply(params, eta)
    return _fsum_dot(xi, integrand)


def _equilibrium_scalars(params: GameParams):
    nu = solve_nu(params)
    omega = solve_omega(params)
    gt_nu = gamma_tilde_apply(params, nu)
    gt_omega = gamma_tilde_apply(params, omega)
    sum_nu = math.fsum(nu.tolist())
    sum_omega = math.fsum(omega.tolist())
    q_nu = _fsum_dot(nu, gt_nu)                       # nu^T Gt nu
    q_omega = _fsum_dot(omega, gt_omega)              # omega^T Gt omega
    # omega^T (Gt - Gt^T) nu = omega^T Gt nu - nu^T Gt omega
    mixed = _fsum_dot(omega, gt_nu) - _fsum_dot(nu, gt_omega)
    return sum_nu, sum_omega, q_nu, q_omega, mixed


def _decomposition_terms(params: GameParams, x: float, y: float):
    sum_nu, sum_omega, q_nu, q_omega, mixed = _equilibrium_scalars(params)
    sum_sq = (x + y) ** 2
    diff_sq = (x - y) ** 2
    sq_diff = x * x - y * y
    t1 = sum_sq / sum_nu
    t2 = sq_diff * (sum_nu + sum_omega) / (sum_nu * sum_omega)
    t3 = diff_sq / sum_omega
    t4 = ((x + y) / sum_nu) ** 2 * q_nu
    t5 = sq_diff / (sum_nu * sum_omega) * mixed
    t6 = -((x - y) / sum_omega) ** 2 * q_omega
    return (t1, t2, t3, t4, t5, t6)


def cost_decomposition(params: GameParams) -> CostBreakdown:
    """Closed cost decomposition, tax revenue, and taxation cost."""
    terms = _decomposition_terms(params, params.x, params.y)
    cost_xi = math.fsum(terms) / 8.0
    # agent 2 swaps inventories; only the (x^2 - y^2) terms change sign
    cost_eta = math.fsum((terms[0], -terms[1], terms[2], terms[3], -terms[4], terms[5])) / 8.0
    total = cost_xi + cost_eta

    sol = equilibrium_strategies(params)
    tax_revenue = params.theta * (_fsum_dot(sol.xi_star, sol.xi_star)
                                  + _fsum_dot(sol.eta_star, sol.eta_star))
    if params.theta == 0.0:
        taxation_cost = 0.0
    else:
        base = _decomposition_terms(replace(params, theta=0.0), params.x, params.y)
        base_total = (math.fsum(base)
                      + math.fsum((base[0], -base[1], base[2], base[3], -base[4], base[5]))) / 8.0
        taxation_cost = total - base_total
    return CostBreakdown(
        cost_xi=cost_xi,
        cost_eta=cost_eta,
        total_cost=total,
        tax_revenue=tax_revenue,
        taxation_cost=taxation_cost,
        decomposition_terms=terms,
    )


def tax_metrics(params: GameParams) -> tuple[float, float]:
    """(total tax revenue, total taxation cost) at the given tax level."""
    breakdown = cost_decomposition(params)
    return breakdown.tax_revenue, breakdown.taxation_cost
