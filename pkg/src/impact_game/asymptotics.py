"""High-frequency limits of equilibrium strategies, costs, and tax metrics.

At positive transaction-cost level the renormalized remaining-inventory
curves and the expected costs converge (the limits do not depend on the
level); at zero level they oscillate forever between exactly two cluster
curves / cluster values, one approached along even grid counts and one
along odd.  Every limit expression here is coded exactly as displayed in
its derivation, with no algebraic simplification, so each formula can be
traced term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .costs import cost_decomposition
from .equilibrium import equilibrium_strategies
from .model import GameParams, ParameterError

# Relative slack when snapping Nt/T to an integer grid index; protects
# ceil() against one-ulp overshoots at exact grid times.
_GRID_SNAP = 1e-9

# The tax-gap limit multiplies exp(6*rho*T)-sized terms twice over; past
# rho*T ~ 59 that overflows double precision, so fail loudly well before.
# (Relative accuracy of all limit values is ~1e-12 up to rho*T ~ 15 and
# degrades smoothly beyond, from cancellation among exponential terms.)
MAX_RHO_T = 50.0


@dataclass(frozen=True)
class StepPath:
    """Remaining-inventory step curve built from normalized trades.

    The value at time t is ``1 - sum_{k <= n_t} trades[k]`` with
    ``n_t = ceil(N*t/T)``: trades strictly before t count, the trade at t
    itself does not (left-limit convention).  Hence the value is 1 at t = 0
    and equals the final trade fraction at t = T.
    """

    T: float
    N: int
    remaining: np.ndarray  # remaining[n] = 1 - sum of first n trades

    def grid_index(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0) or np.any(t > self.T):
            raise ParameterError(f"t must lie in [0, {self.T}]")
        scaled = self.N * t / self.T
        snapped = np.rint(scaled)
        use_snap = np.abs(scaled - snapped) <= _GRID_SNAP * self.N
        return np.where(use_snap, snapped, np.ceil(scaled)).astype(int)

    def __call__(self, t):
        values = self.remaining[self.grid_index(t)]
        return float(values) if np.isscalar(t) else values


def renormalized_paths(params: GameParams, solution=None) -> tuple[StepPath, StepPath]:
    """Step curves of both normalized strategy components."""
    sol = equilibrium_strategies(params) if solution is None else solution
    rem_v = np.concatenate(([1.0], 1.0 - np.cumsum(sol.v)))
    rem_w = np.concatenate(([1.0], 1.0 - np.cumsum(sol.w)))
    return (StepPath(params.T, params.N, rem_v), StepPath(params.T, params.N, rem_w))


@dataclass(eq=False)
class LimitBundle:
    """All closed-form high-frequency limits for one (rho, T, x, y).

    Curves for the positive-cost regime (``v_limit``, ``w_limit``), the four
    cluster-curve pairs for the zero-cost regime, and the scalar cost / tax
    limits for both regimes.  Positive-regime values are independent of the
    actual cost level.
    """

    rho: float
    T: float
    x: float
    y: float
    v_limit: Callable
    w_limit: Callable
    f_plus: Callable
    f_minus: Callable
    g_plus: Callable
    g_minus: Callable
    phi_plus: Callable
    phi_minus: Callable
    psi_plus: Callable
    psi_minus: Callable
    cost_limit_pos: float
    cost_limit_even: float
    cost_limit_odd: float
    tr_limit: float
    tr_minus_tc_liminf: float


def limit_bundle(rho: float, T: float, x: float, y: float) -> LimitBundle:
    """Evaluate every limit expression for the given horizon and inventories."""
    if rho <= 0.0 or T <= 0.0:
        raise ParameterError("rho and T must be positive")
    if rho * T > MAX_RHO_T:
        raise ParameterError(
            f"rho*T = {rho * T!r} exceeds {MAX_RHO_T}; the limit expressions "
            f"overflow double precision"
        )
    z = rho * T
    e3, e6, em = math.exp(3.0 * z), math.exp(6.0 * z), math.exp(-z)

    def v_limit(t):
        return (np.exp(3 * z) * (6 * rho * (T - t) + 4) - 4 * np.exp(3 * rho * np.asarray(t, dtype=float))) / (
            2 * np.exp(3 * z) * (3 * z + 5) - 1
        )

    def w_limit(t):
        return (rho * (T - np.asarray(t, dtype=float)) + 1) / (z + 1)

    def _f(t, sign):
        t = np.asarray(t, dtype=float)
        den = 2 * e6 * (3 * z + 5) + e3 + 3 * z + 7
        return (
            sign * 3 * np.exp(3 * rho * (T - t))
            + sign * 6 * np.exp(3 * rho * (2 * T - t))
            + e6 * (6 * rho * (T - t) + 4)
            + 3 * rho * (T - t)
            + 2 * e3
            + 4 * np.exp(3 * rho * t)
            - 4 * np.exp(3 * rho * (T + t))
            + 3
        ) / den

    def _g(t, sign):
        t = np.asarray(t, dtype=float)
        den = 2 * e6 * (3 * z + 5) - 3 * e3 - 3 * z - 7
        return (
            sign * 3 * np.exp(3 * rho * (T - t))
            + sign * 6 * np.exp(3 * rho * (2 * T - t))
            + e6 * (6 * rho * (T - t) + 4)
            - 3 * rho * (T - t)
            - 2 * e3
            - 4 * np.exp(3 * rho * t)
            - 4 * np.exp(3 * rho * (T + t))
            - 3
        ) / den

    def _phi(t, sign):
        t = np.asarray(t, dtype=float)
        return (1 + rho * (T - t) + sign * np.exp(-rho * (T - t))) / (1 + z + em)

    def _psi(t, sign):
        t = np.asarray(t, dtype=float)
        return (1 + rho * (T - t) + sign * np.exp(-rho * (T - t))) / (1 + z - em)

    sum_sq = (x + y) ** 2
    diff_sq = (x - y) ** 2
    sq_diff = x * x - y * y
    cost_limit_pos = (
        sum_sq * (36 * e6 * (8 * z + 13) - 60 * e3 - 3) / (16 * (2 * e3 * (3 * z + 5) - 1) ** 2)
        + sq_diff / (2 * (z + 1))
        + diff_sq / (16 * (z + 1) ** 2)
    )
    cost_limit_even = (
        sum_sq * (6 * e6 + 3) / (2 * (2 * e6 * (3 * z + 5) + e3 + 3 * z + 7))
        + sq_diff / (2 * (em + z + 1))
    )
    cost_limit_odd = (
        sum_sq * (6 * e6 - 3) / (2 * (2 * e6 * (3 * z + 5) - 3 * e3 - 3 * z - 7))
        + sq_diff / (2 * (-em + z + 1))
    )
    tr_limit = (
        sum_sq * 9 * (1 + 2 * e3) ** 2 / (8 * (1 - 2 * e3 * (5 + 3 * z)) ** 2)
        + diff_sq / (8 * (z + 1) ** 2)
    )
    tr_minus_tc_liminf = (
        sum_sq * 3 * (2 * e3 + 1) ** 2 * (3 * (z + 3) + 2 * e6 * (3 * z + 5) - e3 * (12 * z + 19))
    ) / (2 * (1 - 2 * e3 * (3 * z + 5)) ** 2 * (3 * z + e3 + 2 * e6 * (3 * z + 5) + 7))

    return LimitBundle(
        rho=rho, T=T, x=x, y=y,
        v_limit=v_limit, w_limit=w_limit,
        f_plus=lambda t: _f(t, +1.0), f_minus=lambda t: _f(t, -1.0),
        g_plus=lambda t: _g(t, +1.0), g_minus=lambda t: _g(t, -1.0),
        phi_plus=lambda t: _phi(t, +1.0), phi_minus=lambda t: _phi(t, -1.0),
        psi_plus=lambda t: _psi(t, +1.0), psi_minus=lambda t: _psi(t, -1.0),
        cost_limit_pos=cost_limit_pos,
        cost_limit_even=cost_limit_even,
        cost_limit_odd=cost_limit_odd,
        tr_limit=tr_limit,
        tr_minus_tc_liminf=tr_minus_tc_liminf,
    )


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    cost: float
    limit: float
    abs_error: float
    tax_revenue: float
    taxation_cost: float


@dataclass(frozen=True)
class TrendSummary:
    """Fraction of successive error decreases plus the endpoint errors."""

    decreasing_fraction: float
    first_error: float
    last_error: float


def convergence_study(params_base: GameParams, n_list: Sequence[int]) -> tuple[list[ConvergenceRow], TrendSummary]:
    """Finite-N equilibrium costs against the applicable closed-form limit.

    For positive cost level the comparison limit is the single positive-
    regime value; at zero level each N is compared against the cluster value
    matching its parity.
    """
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ParameterError("n_list must be sorted strictly ascending")
    bundle = limit_bundle(params_base.rho, params_base.T, params_base.x, params_base.y)
    rows = []
    for n in n_list:
        p = GameParams(rho=params_base.rho, T=params_base.T, N=n,
                       theta=params_base.theta, x=params_base.x, y=params_base.y)
        breakdown = cost_decomposition(p)
        if params_base.theta > 0.0:
            limit = bundle.cost_limit_pos
        else:
            limit = bundle.cost_limit_even if n % 2 == 0 else bundle.cost_limit_odd
        rows.append(ConvergenceRow(
            N=n,
            cost=breakdown.cost_xi,
            limit=limit,
            abs_error=abs(breakdown.cost_xi - limit),
            tax_revenue=breakdown.tax_revenue,
            taxation_cost=breakdown.taxation_cost,
        ))
    errors = [r.abs_error for r in rows]
    decreases = sum(b < a for a, b in zip(errors, errors[1:]))
    fraction = decreases / (len(errors) - 1) if len(errors) > 1 else float("nan")
    return rows, TrendSummary(decreasing_fraction=fraction,
                              first_error=errors[0], last_error=errors[-1])


def cost_comparison_predicate(rhoT: float, x: float, y: float) -> tuple[bool, float]:
    """Is the positive-level cost limit below both zero-level cluster values?

    Returns the predicate together with the margin
    ``min(even, odd cluster value) - positive-regime limit`` (positive iff
    the predicate holds).  The zero-level limit inferior is the smaller of
    the two cluster values.
    """
    bundle = limit_bundle(rho=rhoT, T=1.0, x=x, y=y)
    margin = min(bundle.cost_limit_even, bundle.cost_limit_odd) - bundle.cost_limit_pos
    return margin > 0.0, margin
