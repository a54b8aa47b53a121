"""Continuous-time version of the game: equilibrium, costs, optimality.

The unique continuous-time Nash equilibrium exists exactly at the critical
cost level theta* = 1/4 and consists of the high-frequency limit curves of
the discrete equilibrium: inventory paths with a block trade at time 0, an
absolutely continuous part whose density lies in span{1, exp(3*rho*s)}, and
a block trade at time T.  Because the densities are exponential
polynomials, every Stieltjes integral against them (the first-order
condition curve and the cost functional) evaluates in closed form; numeric
quadrature appears only in test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ParameterError


class ExpPoly:
    """Exponential polynomial sum_j c_j * exp(lambda_j * t).

    Closed under addition, scalar and pointwise multiplication, and definite
    integration; the symbolic antiderivative requires all exponents nonzero
    (definite integrals handle the constant term directly).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[float, float] | None = None):
        self.terms = {}
        if terms:
            for lam, c in terms.items():
                if c != 0.0:
                    self.terms[float(lam)] = self.terms.get(float(lam), 0.0) + float(c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for lam, c in self.terms.items():
            out += c * np.exp(lam * t)
        return float(out) if out.ndim == 0 else out

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        merged = dict(self.terms)
        for lam, c in other.terms.items():
            merged[lam] = merged.get(lam, 0.0) + c
        return ExpPoly(merged)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            prod: dict[float, float] = {}
            for la, ca in self.terms.items():
                for lb, cb in other.terms.items():
                    lam = la + lb
                    prod[lam] = prod.get(lam, 0.0) + ca * cb
            return ExpPoly(prod)
        return self.scale(float(other))

    __rmul__ = __mul__

    def scale(self, factor: float) -> "ExpPoly":
        return ExpPoly({lam: factor * c for lam, c in self.terms.items()})

    def shift_exponent(self, delta: float) -> "ExpPoly":
        """Multiply by exp(delta * t)."""
        return ExpPoly({lam + delta: c for lam, c in self.terms.items()})

    def antiderivative_from_zero(self) -> "ExpPoly":
        """F with F(t) = integral_0^t of self; requires no constant term."""
        out: dict[float, float] = {}
        const = 0.0
        for lam, c in self.terms.items():
            if lam == 0.0:
                raise ValueError("symbolic antiderivative needs all exponents nonzero")
            out[lam] = out.get(lam, 0.0) + c / lam
            const -= c / lam
        out[0.0] = out.get(0.0, 0.0) + const
        return ExpPoly(out)

    def integral_from_zero(self, t):
        """integral_0^t of self, vectorized over t; constant terms allowed."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for lam, c in self.terms.items():
            if lam == 0.0:
                out += c * t
            else:
                out += c * (np.exp(lam * t) - 1.0) / lam
        return float(out) if out.ndim == 0 else out

    def definite_integral(self, a: float, b: float) -> float:
        return float(self.integral_from_zero(b) - self.integral_from_zero(a))


@dataclass(frozen=True)
class BVStrategy:
    """Inventory path with block trades at 0 and T and a smooth density.

    ``value(t)`` is the right-continuous inventory: ``initial_value`` just
    before time 0, then ``initial_value + jump_at_0 + integral of density``
    on [0, T), closing at exactly 0 through ``jump_at_T``.
    """

    initial_value: float
    jump_at_0: float
    jump_at_T: float
    density: ExpPoly
    horizon: float
    _mass_tol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        if self.horizon <= 0.0:
            raise ParameterError(f"horizon must be positive, got {self.horizon!r}")
        scale = max(1.0, abs(self.initial_value))
        if abs(self.terminal_value()) > self._mass_tol * scale:
            raise ParameterError(
                f"strategy does not liquidate: value at T is {self.terminal_value()!r}"
            )

    def terminal_value(self) -> float:
        return (self.initial_value + self.jump_at_0
                + self.density.definite_integral(0.0, self.horizon) + self.jump_at_T)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0) or np.any(t > self.horizon):
            raise ParameterError(f"t must lie in [0, {self.horizon}]")
        out = (self.initial_value + self.jump_at_0
               + self.density.integral_from_zero(np.minimum(t, self.horizon)))
        out = out + np.where(t >= self.horizon, self.jump_at_T, 0.0)
        return float(out) if out.ndim == 0 else out


def continuous_equilibrium(rho: float, T: float, x: float, y: float) -> tuple[BVStrategy, BVStrategy]:
    """The critical-level equilibrium inventory paths of both agents.

    Both agents share the block trade at time 0 (it carries the (x+y)
    component only); the block trades at T are opposite (they carry the
    (x-y) component only).  Densities lie in span{1, exp(3*rho*s)}.
    """
    if rho <= 0.0 or T <= 0.0:
        raise ParameterError("rho and T must be positive")
    if rho * T > 50.0:
        raise ParameterError(
            f"rho*T = {rho * T!r} exceeds 50; the cost and condition "
            f"integrals overflow double precision (and lose relative "
            f"accuracy from exponential cancellation past rho*T ~ 15)"
        )
    z = rho * T
    denom = 2.0 * math.exp(3.0 * z) * (3.0 * z + 5.0) - 1.0
    jump0 = -3.0 * (x + y) * (2.0 * math.exp(3.0 * z) + 1.0) / (2.0 * denom)
    jump_T = -(x - y) / (2.0 * (z + 1.0))
    shared = ExpPoly({0.0: -3.0 * rho * (x + y) * math.exp(3.0 * z) / denom,
                      3.0 * rho: -6.0 * rho * (x + y) / denom})
    antisym = -rho * (x - y) / (2.0 * (z + 1.0))
    dens_x = shared + ExpPoly({0.0: antisym})
    dens_y = shared + ExpPoly({0.0: -antisym})
    X = BVStrategy(initial_value=x, jump_at_0=jump0, jump_at_T=jump_T, density=dens_x, horizon=T)
    Y = BVStrategy(initial_value=y, jump_at_0=jump0, jump_at_T=-jump_T, density=dens_y, horizon=T)
    return X, Y


def _two_sided_kernel_integral(rho: float, T: float, dens: ExpPoly) -> ExpPoly:
    """K(t) = integral_0^T exp(-rho*|t-s|) dens(s) ds as an exponential polynomial."""
    g1 = dens.shift_exponent(rho).antiderivative_from_zero()    # int_0^t e^{rho s} dens
    g2 = dens.shift_exponent(-rho).antiderivative_from_zero()   # int_0^t e^{-rho s} dens
    return (ExpPoly({-rho: 1.0}) * g1
            + ExpPoly({rho: g2(T)}) + ExpPoly({rho: -1.0}) * g2)


def _causal_kernel_integral(rho: float, dens: ExpPoly) -> ExpPoly:
    """J(t) = integral_0^t exp(-rho*(t-s)) dens(s) ds."""
    return ExpPoly({-rho: 1.0}) * dens.shift_exponent(rho).antiderivative_from_zero()


def first_order_condition_curve(X: BVStrategy, Y: BVStrategy, rho: float,
                                theta: float, ts: np.ndarray) -> np.ndarray:
    """Left side of the stationarity condition for X given Y at times ts.

    The curve is ``int exp(-rho*|t-s|) dX_s + int_[0,t) exp(-rho*(t-s)) dY_s
    + dY_jump(t)/2 + 2*theta*dX_jump(t)``; X is optimal against Y among
    strategies with its initial inventory iff this is constant in t.
    """
    T = X.horizon
    ts = np.asarray(ts, dtype=float)
    kx = _two_sided_kernel_integral(rho, T, X.density)
    jy = _causal_kernel_integral(rho, Y.density)
    out = (X.jump_at_0 * np.exp(-rho * ts)
           + X.jump_at_T * np.exp(-rho * (T - ts))
           + kx(ts)
           + np.where(ts > 0.0, Y.jump_at_0 * np.exp(-rho * ts), 0.0)
           + jy(ts))
    out = out + np.where(ts == 0.0, 0.5 * Y.jump_at_0 + 2.0 * theta * X.jump_at_0, 0.0)
    out = out + np.where(ts == T, 0.5 * Y.jump_at_T + 2.0 * theta * X.jump_at_T, 0.0)
    return out


@dataclass(frozen=True)
class FredholmReport:
    """Constancy diagnostics of both agents' first-order conditions.

    ``analytic_constant_agent1/2`` are the closed-form constants the curves
    must equal at the critical level theta = 1/4; away from that level the
    curves fail to be constant at the two endpoints.
    """

    theta: float
    constant_estimate_agent1: float
    constant_estimate_agent2: float
    max_abs_deviation: float
    analytic_constant_agent1: float
    analytic_constant_agent2: float


def fredholm_residual(rho: float, T: float, x: float, y: float, theta: float,
                      n_grid: int) -> FredholmReport:
    """Evaluate both first-order-condition curves on an n_grid time grid.

    Uses the critical-level equilibrium paths regardless of ``theta``: the
    report shows whether those paths remain optimal at the given cost level
    (they do exactly at theta = 1/4).
    """
    if n_grid < 16:
        raise ParameterError(f"n_grid must be >= 16, got {n_grid}")
    X, Y = continuous_equilibrium(rho, T, x, y)
    ts = np.linspace(0.0, T, n_grid)
    f1 = first_order_condition_curve(X, Y, rho, theta, ts)
    f2 = first_order_condition_curve(Y, X, rho, theta, ts)
    c1 = float(np.mean(f1))
    c2 = float(np.mean(f2))
    dev = max(float(np.max(np.abs(f1 - c1))), float(np.max(np.abs(f2 - c2))))
    z = rho * T
    shared = 18.0 * (x + y) / (10.0 + 6.0 * z - math.exp(-3.0 * z))
    ref1 = -0.5 * ((x - y) / (z + 1.0) + shared)
    ref2 = 0.5 * ((x - y) / (z + 1.0) - shared)
    return FredholmReport(
        theta=theta,
        constant_estimate_agent1=c1,
        constant_estimate_agent2=c2,
        max_abs_deviation=dev,
        analytic_constant_agent1=ref1,
        analytic_constant_agent2=ref2,
    )


def liquidation_cost(X: BVStrategy, Y: BVStrategy, rho: float, theta: float) -> float:
    """Expected liquidation cost of X given Y, all integrals in closed form.

    Cost = 1/2 * C(X,X) + C1(X,Y) + 1/2 * C2(X,Y) + theta * C2(X,X) with
    C the two-sided impact form, C1 the causal cross form, and C2 the jump
    product sum.
    """
    T = X.horizon
    dx, dy = X.density, Y.density
    e_mT = math.exp(-rho * T)

    kx = _two_sided_kernel_integral(rho, T, dx)
    c_xx = (
        (dx * kx).definite_integral(0.0, T)
        + X.jump_at_0 ** 2 + X.jump_at_T ** 2
        + 2.0 * e_mT * X.jump_at_0 * X.jump_at_T
        + 2.0 * X.jump_at_0 * (dx * ExpPoly({-rho: 1.0})).definite_integral(0.0, T)
        + 2.0 * X.jump_at_T * (dx * ExpPoly({rho: e_mT})).definite_integral(0.0, T)
    )

    jy = _causal_kernel_integral(rho, dy)
    c1_xy = (
        (dx * jy).definite_integral(0.0, T)
        + Y.jump_at_0 * (dx * ExpPoly({-rho: 1.0})).definite_integral(0.0, T)
        + X.jump_at_T * (Y.jump_at_0 * e_mT + jy(T))
    )

    c2_xy = X.jump_at_0 * Y.jump_at_0 + X.jump_at_T * Y.jump_at_T
    c2_xx = X.jump_at_0 ** 2 + X.jump_at_T ** 2
    return 0.5 * c_xx + c1_xy + 0.5 * c2_xy + theta * c2_xx


def continuous_cost(rho: float, T: float, x: float, y: float) -> float:
    """Equilibrium cost of agent 1 at the critical level theta = 1/4."""
    X, Y = continuous_equilibrium(rho, T, x, y)
    return liquidation_cost(X, Y, rho, theta=0.25)


def discretize_strategy(X: BVStrategy, N: int) -> np.ndarray:
    """Project an inventory path onto the N-step grid as sell-positive trades.

    Trade k is the inventory decrement over (t_{k-1}, t_k] (the k = 0 entry
    is the block at time 0), so the trades sum to the initial inventory.
    """
    if int(N) != N or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N!r}")
    grid = np.arange(N + 1) * (X.horizon / N)
    grid[-1] = X.horizon  # guard roundoff so the terminal block is included
    values = X.value(grid)
    trades = np.empty(N + 1)
    trades[0] = X.initial_value - values[0]
    trades[1:] = values[:-1] - values[1:]
    return trades
