"""Monte Carlo simulation of realized costs under randomized priority.

When both agents trade at the same instant, a fair coin decides whose order
executes first; the realized cross cost of agent 1 at step k is
``eps_k * xi_k * eta_k`` and agent 2 gets the complementary
``(1 - eps_k) * xi_k * eta_k``.  The simulation reproduces the full realized
cost including the unaffected-price terms, which have zero mean for
deterministic strategies: running it under a random-walk price and under a
constant zero price must agree within Monte Carlo error, which is the
cancellation check the expected-cost formulas rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import GameParams, ParameterError, _check_length, _past_geometric

_PRICE_MODELS = ("constant_zero", "random_walk")
_BATCH = 1 << 14


@dataclass(frozen=True)
class SimConfig:
    """Simulation controls; identical config and seed give identical output."""

    n_samples: int
    seed: int
    price_model: str = "constant_zero"
    walk_scale: float = 0.0

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ParameterError(f"n_samples must be an integer >= 1, got {self.n_samples!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ParameterError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if self.price_model not in _PRICE_MODELS:
            raise ParameterError(f"price_model must be one of {_PRICE_MODELS}, got {self.price_model!r}")
        if not np.isfinite(self.walk_scale) or self.walk_scale < 0.0:
            raise ParameterError(f"walk_scale must satisfy walk_scale >= 0, got {self.walk_scale!r}")


def simulate_samples(params: GameParams, xi: np.ndarray, eta: np.ndarray,
                     config: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample realized costs of both agents.

    Batches derive independent streams from (seed, batch_index) and are
    concatenated in order, so results are reproducible bit-for-bit and
    batches may be evaluated in parallel.
    """
    xi = _check_length(params, xi, "xi")
    eta = _check_length(params, eta, "eta")
    theta = params.theta
    # deterministic part: past-impact and quadratic terms, same every sample
    past = _past_geometric(params.alpha, xi + eta)
    base_xi = math.fsum(((0.5 + theta) * xi * xi + past * xi).tolist())
    base_eta = math.fsum(((0.5 + theta) * eta * eta + past * eta).tolist())
    cross = xi * eta

    xi_costs = np.empty(config.n_samples)
    eta_costs = np.empty(config.n_samples)
    done = 0
    batch_index = 0
    while done < config.n_samples:
        nb = min(_BATCH, config.n_samples - done)
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, batch_index]))
        eps = rng.integers(0, 2, size=(nb, params.n_points)).astype(float)
        cross_xi = eps @ cross
        cross_eta = cross.sum() - cross_xi
        if config.price_model == "random_walk":
            steps = rng.standard_normal((nb, params.n_points)) * config.walk_scale
            steps[:, 0] = 0.0  # walk starts at the unaffected price at t_0
            s0 = np.cumsum(steps, axis=1)
            price_xi = s0 @ xi
            price_eta = s0 @ eta
        else:
            price_xi = price_eta = 0.0
        xi_costs[done : done + nb] = base_xi + cross_xi - price_xi
        eta_costs[done : done + nb] = base_eta + cross_eta - price_eta
        done += nb
        batch_index += 1
    return xi_costs, eta_costs


def simulate_cost(params: GameParams, xi: np.ndarray, eta: np.ndarray,
                  config: SimConfig) -> tuple[float, float, float, float]:
    """(mean cost agent 1, mean cost agent 2, stderr 1, stderr 2)."""
    xi_costs, eta_costs = simulate_samples(params, xi, eta, config)
    n = config.n_samples
    mean_xi = math.fsum(xi_costs.tolist()) / n
    mean_eta = math.fsum(eta_costs.tolist()) / n
    if n > 1:
        var_xi = math.fsum(((xi_costs - mean_xi) ** 2).tolist()) / (n - 1)
        var_eta = math.fsum(((eta_costs - mean_eta) ** 2).tolist()) / (n - 1)
        stderr_xi = math.sqrt(var_xi / n)
        stderr_eta = math.sqrt(var_eta / n)
    else:
        stderr_xi = stderr_eta = float("nan")
    return mean_xi, mean_eta, stderr_xi, stderr_eta
