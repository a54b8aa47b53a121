import numpy as np
import pytest

from impact_game.model import GameParams, build_matrices


def rel_inf(a, b):
    """Relative max-norm distance with a symmetric denominator."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return np.max(np.abs(a - b)) / scale


def dense_systems(params: GameParams):
    """Dense (cooperative, antagonistic) system matrices for oracles."""
    mats = build_matrices(params, allow_large=True)
    eye = np.eye(params.n_points)
    plus = mats.gamma + mats.gamma_tilde + 2.0 * params.theta * eye
    minus = mats.gamma - mats.gamma_tilde + 2.0 * params.theta * eye
    return plus, minus


def acceptance_grid():
    """The solver-equivalence grid shared by several checks."""
    for n in (2, 3, 5, 10, 50, 200):
        for theta in (0.0, 0.05, 0.24, 0.25, 1.0):
            for rhoT in (0.1, 1.0, 10.0):
                yield GameParams(rho=rhoT, T=1.0, N=n, theta=theta, x=1.0, y=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
