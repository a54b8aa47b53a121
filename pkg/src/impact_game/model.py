"""Discrete market impact model: parameters, impact matrices, O(N) kernels.

Two agents liquidate inventories x and y on the equidistant grid
``{k*T/N : k = 0..N}`` in a market whose price impact decays like
``exp(-rho*t)``.  All matrix structure is governed by the single ratio
``alpha = exp(-rho*T/N)``: the lower-triangular impact matrix has 1/2 on
the diagonal and ``alpha**(i-j)`` below it, and its symmetrization is the
Kac-Murdock-Szego matrix with entries ``alpha**|i-j|``, whose inverse is
tridiagonal.  Production code paths never materialize dense matrices; they
use the geometric recursions implemented here, all O(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

# Largest N for which dense (N+1)x(N+1) matrices may be materialized without
# an explicit override; everything past this must go through the O(N) paths.
DENSE_CAP = 512


class ParameterError(ValueError):
    """A model parameter violates its domain bound."""


@dataclass(frozen=True)
class GameParams:
    """Full parameterization of the discrete two-agent liquidation game.

    Attributes
    ----------
    rho : float
        Resilience rate of price impact (1/time), > 0.
    T : float
        Trading horizon (time), > 0.
    N : int
        Grid-step count; trading happens at the N+1 times k*T/N, N >= 2.
    theta : float
        Quadratic transaction-cost weight (dimensionless), >= 0.
    x, y : float
        Initial inventories of agent 1 / agent 2 (shares, sell-positive).

    Derived quantities: ``alpha = exp(-rho*T/N)`` in (0, 1) and
    ``kappa = 2*theta + 1/2`` >= 1/2 (equal iff theta == 0; kappa == 1
    exactly at the critical cost level theta == 1/4).
    """

    rho: float
    T: float
    N: int
    theta: float
    x: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.rho) or self.rho <= 0.0:
            raise ParameterError(f"rho must satisfy rho > 0, got {self.rho!r}")
        if not np.isfinite(self.T) or self.T <= 0.0:
            raise ParameterError(f"T must satisfy T > 0, got {self.T!r}")
        if int(self.N) != self.N or self.N < 2:
            raise ParameterError(f"N must be an integer >= 2, got {self.N!r}")
        if not np.isfinite(self.theta) or self.theta < 0.0:
            raise ParameterError(f"theta must satisfy theta >= 0, got {self.theta!r}")
        for name in ("x", "y"):
            if not np.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite, got {getattr(self, name)!r}")
        a = math.exp(-self.rho * self.T / self.N)
        if not 0.0 < a < 1.0:
            raise ParameterError(
                f"alpha = exp(-rho*T/N) must lie strictly in (0, 1); "
                f"rho*T/N = {self.rho * self.T / self.N!r} gives alpha = {a!r}"
            )

    @property
    def alpha(self) -> float:
        return math.exp(-self.rho * self.T / self.N)

    @property
    def kappa(self) -> float:
        return 2.0 * self.theta + 0.5

    @property
    def n_points(self) -> int:
        return self.N + 1

    @property
    def dt(self) -> float:
        return self.T / self.N

    def times(self) -> np.ndarray:
        """Grid times t_k = k*T/N, k = 0..N."""
        return np.arange(self.N + 1) * self.dt


@dataclass(frozen=True)
class ImpactMatrices:
    """Dense impact matrices (verification / small-N use only).

    ``gamma_tilde`` is lower triangular with 1/2 on the diagonal and
    ``alpha**(i-j)`` strictly below; ``gamma = gamma_tilde + gamma_tilde.T``
    is symmetric with unit diagonal.
    """

    gamma_tilde: np.ndarray
    gamma: np.ndarray
    size: int


def build_matrices(params: GameParams, allow_large: bool = False) -> ImpactMatrices:
    """Materialize the dense impact matrices for ``params``.

    Refuses N > DENSE_CAP unless ``allow_large`` is set: dense storage exists
    only for cross-checks, all production paths are O(N).
    """
    if params.N > DENSE_CAP and not allow_large:
        raise ParameterError(
            f"dense matrices are capped at N <= {DENSE_CAP} "
            f"(got N = {params.N}); pass allow_large=True for an explicit cross-check"
        )
    n = params.n_points
    k = np.arange(n)
    power = np.subtract.outer(k, k)
    gamma_tilde = np.where(power > 0, params.alpha ** np.maximum(power, 0), 0.0)
    np.fill_diagonal(gamma_tilde, 0.5)
    gamma = gamma_tilde + gamma_tilde.T
    gamma_tilde.setflags(write=False)
    gamma.setflags(write=False)
    return ImpactMatrices(gamma_tilde=gamma_tilde, gamma=gamma, size=n)


def _check_length(params: GameParams, vec: np.ndarray, name: str) -> np.ndarray:
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (params.n_points,):
        raise ParameterError(
            f"{name} must be a vector of length N+1 = {params.n_points}, got shape {vec.shape}"
        )
    return vec


def _past_geometric(alpha: float, z: np.ndarray) -> np.ndarray:
    """p with p[i] = sum_{j < i} alpha**(i-j) * z[j], via a linear filter."""
    return lfilter([0.0, alpha], [1.0, -alpha], z)


def _future_geometric(alpha: float, z: np.ndarray) -> np.ndarray:
    """s with s[i] = sum_{j > i} alpha**(j-i) * z[j]."""
    return _past_geometric(alpha, z[::-1])[::-1]


def gamma_tilde_apply(params: GameParams, z: np.ndarray) -> np.ndarray:
    """O(N) product of the lower-triangular impact matrix with ``z``."""
    z = _check_length(params, z, "z")
    return 0.5 * z + _past_geometric(params.alpha, z)


def gamma_tilde_transpose_apply(params: GameParams, z: np.ndarray) -> np.ndarray:
    """O(N) product of the transposed impact matrix with ``z``."""
    z = _check_length(params, z, "z")
    return 0.5 * z + _future_geometric(params.alpha, z)


def gamma_apply(params: GameParams, z: np.ndarray) -> np.ndarray:
    """O(N) product of the symmetric impact matrix with ``z``."""
    z = _check_length(params, z, "z")
    a = params.alpha
    return z + _past_geometric(a, z) + _future_geometric(a, z)


def gamma_inverse_apply(params: GameParams, rhs: np.ndarray) -> np.ndarray:
    """Apply the closed tridiagonal inverse of the symmetric impact matrix.

    The inverse is ``1/(1-alpha**2)`` times the tridiagonal matrix with
    first/last diagonal entry 1, interior diagonal ``1 + alpha**2`` and
    off-diagonals ``-alpha``.  Cost O(N).
    """
    rhs = _check_length(params, rhs, "rhs")
    a = params.alpha
    out = (1.0 + a * a) * rhs
    out[0] = rhs[0]
    out[-1] = rhs[-1]
    out[:-1] -= a * rhs[1:]
    out[1:] -= a * rhs[:-1]
    out /= 1.0 - a * a
    return out
