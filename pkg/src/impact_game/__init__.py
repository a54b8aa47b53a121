"""Two-agent liquidation game with exponentially decaying price impact.

Discrete-time Nash equilibria in O(N), overflow-safe closed forms,
high-frequency limits with their zero-cost cluster curves, the critical
continuous-time equilibrium, tax metrics, and Monte Carlo validation of the
expected-cost formulas.
"""

from .asymptotics import (
    ConvergenceRow,
    LimitBundle,
    StepPath,
    TrendSummary,
    convergence_study,
    cost_comparison_predicate,
    limit_bundle,
    renormalized_paths,
)
from .closed_form import (
    ClosedFormCoefficients,
    InternalConsistencyError,
    ScaledSequences,
    b_inverse_entry,
    coefficients,
    delta_phi_sequences,
    nu_closed_form,
    omega_closed_form,
)
from .continuous_time import (
    BVStrategy,
    ExpPoly,
    FredholmReport,
    continuous_cost,
    continuous_equilibrium,
    discretize_strategy,
    first_order_condition_curve,
    fredholm_residual,
    liquidation_cost,
)
from .costs import CostBreakdown, cost_decomposition, expected_cost, tax_metrics
from .equilibrium import (
    EquilibriumSolution,
    SolverBreakdownError,
    b_tridiagonal_bands,
    build_b_dense,
    count_sign_changes,
    dense_nu_omega,
    equilibrium_strategies,
    find_negative_component,
    oscillation_report,
    solve_nu,
    solve_omega,
)
from .model import (
    DENSE_CAP,
    GameParams,
    ImpactMatrices,
    ParameterError,
    build_matrices,
    gamma_apply,
    gamma_inverse_apply,
    gamma_tilde_apply,
    gamma_tilde_transpose_apply,
)
from .montecarlo import SimConfig, simulate_cost, simulate_samples

__version__ = "0.1.0"

__all__ = [
    "BVStrategy",
    "ClosedFormCoefficients",
    "ConvergenceRow",
    "CostBreakdown",
    "DENSE_CAP",
    "EquilibriumSolution",
    "ExpPoly",
    "FredholmReport",
    "GameParams",
    "ImpactMatrices",
    "InternalConsistencyError",
    "LimitBundle",
    "ParameterError",
    "ScaledSequences",
    "SimConfig",
    "SolverBreakdownError",
    "StepPath",
    "TrendSummary",
    "b_inverse_entry",
    "b_tridiagonal_bands",
    "build_b_dense",
    "build_matrices",
    "coefficients",
    "continuous_cost",
    "continuous_equilibrium",
    "convergence_study",
    "cost_comparison_predicate",
    "cost_decomposition",
    "count_sign_changes",
    "delta_phi_sequences",
    "dense_nu_omega",
    "discretize_strategy",
    "equilibrium_strategies",
    "expected_cost",
    "find_negative_component",
    "first_order_condition_curve",
    "fredholm_residual",
    "gamma_apply",
    "gamma_inverse_apply",
    "gamma_tilde_apply",
    "gamma_tilde_transpose_apply",
    "limit_bundle",
    "liquidation_cost",
    "nu_closed_form",
    "omega_closed_form",
    "oscillation_report",
    "renormalized_paths",
    "simulate_cost",
    "simulate_samples",
    "solve_nu",
    "solve_omega",
    "tax_metrics",
]
