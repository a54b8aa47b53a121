"""Authoritative O(N) computation of the Nash equilibrium of the game.

The two linear systems behind the equilibrium are

    (Gamma + Gamma_tilde + 2*theta*Id) nu    = 1   (cooperative component)
    (Gamma - Gamma_tilde + 2*theta*Id) omega = 1   (antagonistic component)

The first is solved through the factorized tridiagonal system
``B nu = (1-alpha**2) * Gamma^-1 1`` where
``B = (1-alpha**2)(Id + Gamma^-1 (Gamma_tilde + 2*theta*Id))``, using a
pivoted banded LU plus one structured iterative-refinement pass (the leading
principal minors of B can vanish for kappa < 1, e.g. the first pivot
``1 + kappa - 2*alpha**2`` at ``alpha**2 = (1+kappa)/2``, so pivot-free
elimination is not robust).  The second matrix equals the upper-triangular
``Gamma_tilde^T + 2*theta*Id`` and is solved by geometric back substitution.
Both paths are O(N); dense solves exist only behind
:func:`dense_nu_omega` for verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from .model import (
    GameParams,
    build_matrices,
    gamma_apply,
    gamma_inverse_apply,
    gamma_tilde_apply,
    gamma_tilde_transpose_apply,
)

# Entries smaller than this fraction of the max-norm carry no sign when
# counting oscillations (avoids counting roundoff flips).
SIGN_EPS = 1e-13


class SolverBreakdownError(RuntimeError):
    """The banded elimination hit an exactly singular pivot."""


@dataclass(frozen=True)
class EquilibriumSolution:
    """Nash equilibrium of the liquidation game and its diagnostics.

    ``v`` and ``w`` are the normalized system solutions (components summing
    to one); the equilibrium trades are
    ``xi_star = (x+y)/2 * v + (x-y)/2 * w`` and
    ``eta_star = (x+y)/2 * v - (x-y)/2 * w``.  ``foc_deviation`` is the
    largest deviation from constancy of the stationarity gradients
    ``(Gamma + 2*theta*Id) xi_star + Gamma_tilde eta_star`` (and with roles
    swapped), which must be constant vectors at the equilibrium.
    """

    params: GameParams
    nu: np.ndarray
    omega: np.ndarray
    v: np.ndarray
    w: np.ndarray
    xi_star: np.ndarray
    eta_star: np.ndarray
    foc_deviation: float
    min_component_v: float
    min_component_w: float
    sign_changes_v: int
    sign_changes_w: int


def b_tridiagonal_bands(params: GameParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sub-, main and super-diagonal of the aggregate tridiagonal matrix B.

    Interior diagonal ``1 + alpha**2*(kappa-2) + kappa`` with boundary rows
    ``1 - 2*alpha**2 + kappa`` (first) and ``1 - alpha**2 + kappa`` (last);
    constant off-diagonals ``-alpha*(kappa-1)`` below and ``-alpha*kappa``
    above.
    """
    a, k = params.alpha, params.kappa
    n = params.n_points
    diag = np.full(n, 1.0 + a * a * (k - 2.0) + k)
    diag[0] = 1.0 - 2.0 * a * a + k
    diag[-1] = 1.0 - a * a + k
    sub = np.full(n - 1, -a * (k - 1.0))
    sup = np.full(n - 1, -a * k)
    return sub, diag, sup


def build_b_dense(params: GameParams) -> np.ndarray:
    """Dense B from its definition (verification only): product form."""
    mats = build_matrices(params)
    a = params.alpha
    n = params.n_points
    inner = np.eye(n) + np.linalg.solve(mats.gamma, mats.gamma_tilde + 2.0 * params.theta * np.eye(n))
    return (1.0 - a * a) * inner


def _solve_b(params: GameParams, rhs: np.ndarray) -> np.ndarray:
    sub, diag, sup = b_tridiagonal_bands(params)
    n = params.n_points
    ab = np.zeros((3, n))
    ab[0, 1:] = sup
    ab[1, :] = diag
    ab[2, :-1] = sub
    try:
        return solve_banded((1, 1), ab, rhs)
    except LinAlgError as exc:  # singular pivot; impossible for valid params
        raise SolverBreakdownError(f"banded elimination broke down: {exc}") from exc


def _system_apply_plus(params: GameParams, z: np.ndarray) -> np.ndarray:
    """(Gamma + Gamma_tilde + 2*theta*Id) z, structured O(N)."""
    return gamma_apply(params, z) + gamma_tilde_apply(params, z) + 2.0 * params.theta * z


def _system_apply_minus(params: GameParams, z: np.ndarray) -> np.ndarray:
    """(Gamma - Gamma_tilde + 2*theta*Id) z = (Gamma_tilde^T + 2*theta*Id) z."""
    return gamma_tilde_transpose_apply(params, z) + 2.0 * params.theta * z


def solve_nu(params: GameParams, max_refine: int = 2) -> np.ndarray:
    """Solve the cooperative system in O(N) with iterative refinement.

    The right-hand side of the factorized system is known analytically:
    ``(1-alpha**2) Gamma^-1 1 = (1-alpha) * (1, 1-alpha, ..., 1-alpha, 1)``.
    Refinement drives the residual of the original system to roundoff level.
    """
    a = params.alpha
    n = params.n_points
    rhs = np.full(n, (1.0 - a) * (1.0 - a))
    rhs[0] = rhs[-1] = 1.0 - a
    nu = _solve_b(params, rhs)
    ones = np.ones(n)
    for _ in range(max_refine):
        residual = ones - _system_apply_plus(params, nu)
        if np.max(np.abs(residual)) <= 1e-14:
            break
        correction = (1.0 - a * a) * gamma_inverse_apply(params, residual)
        nu = nu + _solve_b(params, correction)
    return nu


def solve_omega(params: GameParams) -> np.ndarray:
    """Solve the antagonistic system by geometric back substitution, O(N).

    Eliminating the trailing geometric sums turns the upper-triangular
    system into ``omega[i] = (1-alpha)/kappa + r*omega[i+1]`` with
    ``r = alpha*(kappa-1)/kappa`` and ``omega[N] = 1/kappa``.
    """
    a, k = params.alpha, params.kappa
    r = a * (k - 1.0) / k
    c = (1.0 - a) / k
    omega = np.empty(params.n_points)
    omega[-1] = 1.0 / k
    for i in range(params.N - 1, -1, -1):
        omega[i] = c + r * omega[i + 1]
    return omega


def dense_nu_omega(params: GameParams, allow_large: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Dense LU solves of both systems (verification flag path only)."""
    mats = build_matrices(params, allow_large=allow_large)
    n = params.n_points
    eye = np.eye(n)
    ones = np.ones(n)
    nu = np.linalg.solve(mats.gamma + mats.gamma_tilde + 2.0 * params.theta * eye, ones)
    omega = np.linalg.solve(mats.gamma - mats.gamma_tilde + 2.0 * params.theta * eye, ones)
    return nu, omega


def count_sign_changes(vec: np.ndarray, zero_tol: float = SIGN_EPS) -> int:
    """Strict sign alternations between consecutive entries.

    Entries below ``zero_tol * max|vec|`` carry no sign and are skipped.
    """
    vec = np.asarray(vec, dtype=float)
    scale = np.max(np.abs(vec)) if vec.size else 0.0
    if scale == 0.0:
        return 0
    signs = np.sign(vec[np.abs(vec) >= zero_tol * scale])
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def equilibrium_strategies(params: GameParams) -> EquilibriumSolution:
    """Compute the unique Nash equilibrium and its optimality diagnostics."""
    nu = solve_nu(params)
    omega = solve_omega(params)
    v = nu / np.sum(nu)
    w = omega / np.sum(omega)
    half_sum = 0.5 * (params.x + params.y)
    half_diff = 0.5 * (params.x - params.y)
    xi = half_sum * v + half_diff * w
    eta = half_sum * v - half_diff * w

    g1 = gamma_apply(params, xi) + 2.0 * params.theta * xi + gamma_tilde_apply(params, eta)
    g2 = gamma_apply(params, eta) + 2.0 * params.theta * eta + gamma_tilde_apply(params, xi)
    dev = max(np.max(np.abs(g1 - np.mean(g1))), np.max(np.abs(g2 - np.mean(g2))))

    for arr in (nu, omega, v, w, xi, eta):
        arr.setflags(write=False)
    return EquilibriumSolution(
        params=params,
        nu=nu,
        omega=omega,
        v=v,
        w=w,
        xi_star=xi,
        eta_star=eta,
        foc_deviation=float(dev),
        min_component_v=float(np.min(v)),
        min_component_w=float(np.min(w)),
        sign_changes_v=count_sign_changes(v),
        sign_changes_w=count_sign_changes(w),
    )


def oscillation_report(params: GameParams) -> tuple[float, float, int, int]:
    """(min component of v, min of w, sign changes of v, of w)."""
    sol = equilibrium_strategies(params)
    return (sol.min_component_v, sol.min_component_w, sol.sign_changes_v, sol.sign_changes_w)


def find_negative_component(theta: float, n_values=None, rhoT_values=None,
                            threshold: float = -1e-8):
    """Search for a grid point where v or w has a clearly negative entry.

    Below the critical cost level theta* = 1/4 such points exist; the search
    scans (N, rho*T) pairs and returns the first hit as a
    ``(N, rhoT, min_component)`` tuple, or ``None`` if the grid shows none.
    """
    if n_values is None:
        n_values = range(2, 201)
    if rhoT_values is None:
        rhoT_values = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
    for rhoT in rhoT_values:
        for n in n_values:
            p = GameParams(rho=rhoT, T=1.0, N=n, theta=theta)
            m = min(np.min(nu_to_v(solve_nu(p))), np.min(nu_to_v(solve_omega(p))))
            if m < threshold:
                return (n, rhoT, float(m))
    return None


def nu_to_v(vec: np.ndarray) -> np.ndarray:
    """Normalize a system solution so its components sum to one."""
    return vec / np.sum(vec)
