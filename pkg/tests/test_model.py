import math

import numpy as np
import pytest

from impact_game.model import (
    DENSE_CAP,
    GameParams,
    ParameterError,
    build_matrices,
    gamma_apply,
    gamma_inverse_apply,
    gamma_tilde_apply,
    gamma_tilde_transpose_apply,
)

from conftest import rel_inf


@pytest.mark.parametrize("kwargs,fragment", [
    (dict(rho=0.0, T=1.0, N=2, theta=0.0), "rho"),
    (dict(rho=-1.0, T=1.0, N=2, theta=0.0), "rho"),
    (dict(rho=1.0, T=0.0, N=2, theta=0.0), "T"),
    (dict(rho=1.0, T=1.0, N=1, theta=0.0), "N"),
    (dict(rho=1.0, T=1.0, N=2, theta=-0.1), "theta"),
    (dict(rho=1.0, T=1.0, N=2, theta=0.0, x=float("nan")), "x"),
    (dict(rho=float("inf"), T=1.0, N=2, theta=0.0), "rho"),
])
def test_parameter_domain_errors_name_the_bound(kwargs, fragment):
    with pytest.raises(ParameterError, match=fragment):
        GameParams(**kwargs)


def test_alpha_overflow_guard():
    # rho*T/N so large that alpha underflows to exactly zero
    with pytest.raises(ParameterError, match="alpha"):
        GameParams(rho=1e6, T=1.0, N=2, theta=0.0)


def test_derived_quantities():
    p = GameParams(rho=2.0, T=1.5, N=10, theta=0.25)
    assert 0.0 < p.alpha < 1.0
    assert p.alpha == pytest.approx(math.exp(-2.0 * 1.5 / 10))
    assert p.kappa == 1.0  # exactly at the critical cost level
    assert GameParams(rho=1, T=1, N=2, theta=0.0).kappa == 0.5
    assert GameParams(rho=1, T=1, N=2, theta=1.0).kappa == 2.5
    assert np.allclose(p.times(), np.arange(11) * 0.15)


def test_gamma_row_matches_geometric_definition():
    # alpha = 0.5 via rho*T/N = log 2
    p = GameParams(rho=2.0 * math.log(2.0), T=1.0, N=2, theta=0.0)
    assert p.alpha == pytest.approx(0.5, rel=1e-15)
    mats = build_matrices(p)
    assert np.allclose(mats.gamma[0], [1.0, 0.5, 0.25], rtol=0, atol=1e-15)
    assert np.all(np.diag(mats.gamma) == 1.0)


def test_gamma_is_exact_sum_of_triangles():
    p = GameParams(rho=0.8, T=2.0, N=40, theta=0.3)
    mats = build_matrices(p)
    assert np.all(mats.gamma - (mats.gamma_tilde + mats.gamma_tilde.T) == 0.0)
    assert np.all(mats.gamma == mats.gamma.T)


def test_gamma_tilde_columns_are_geometric():
    p = GameParams(rho=1.3, T=1.0, N=12, theta=0.0)
    gt = build_matrices(p).gamma_tilde
    for j in range(p.N - 1):
        col = gt[j + 1 :, j]
        assert np.allclose(col[1:] / col[:-1], p.alpha, rtol=1e-13)


def test_dense_cap_enforced():
    p = GameParams(rho=1.0, T=1.0, N=DENSE_CAP + 1, theta=0.0)
    with pytest.raises(ParameterError, match="dense"):
        build_matrices(p)
    mats = build_matrices(p, allow_large=True)
    assert mats.size == DENSE_CAP + 2


def test_matrices_are_read_only():
    mats = build_matrices(GameParams(rho=1, T=1, N=4, theta=0.1))
    with pytest.raises(ValueError):
        mats.gamma[0, 0] = 2.0


def test_matvecs_match_dense(rng):
    for n, rhoT in [(3, 0.2), (17, 1.0), (120, 5.0), (300, 0.05)]:
        p = GameParams(rho=rhoT, T=1.0, N=n, theta=0.0)
        mats = build_matrices(p)
        z = rng.standard_normal(p.n_points)
        assert rel_inf(gamma_tilde_apply(p, z), mats.gamma_tilde @ z) < 1e-13
        assert rel_inf(gamma_tilde_transpose_apply(p, z), mats.gamma_tilde.T @ z) < 1e-13
        assert rel_inf(gamma_apply(p, z), mats.gamma @ z) < 1e-13


def test_gamma_inverse_roundtrip(rng):
    for n in (2, 10, 100, 500):
        p = GameParams(rho=1.0, T=1.0, N=n, theta=0.0)
        z = rng.standard_normal(p.n_points)
        rhs = gamma_apply(p, z)
        assert rel_inf(gamma_inverse_apply(p, rhs), z) < 1e-12
    # conditioning grows like N/(rho*T); at N = 2000 the module-level
    # residual bound (1e-10) is the right yardstick
    p = GameParams(rho=1.0, T=1.0, N=2000, theta=0.0)
    z = rng.standard_normal(p.n_points)
    rhs = gamma_apply(p, z)
    assert rel_inf(gamma_inverse_apply(p, rhs), z) < 1e-10


def test_gamma_inverse_residual_bound(rng):
    # ||Gamma * (Gamma^-1 rhs) - rhs||_inf <= 1e-10 ||rhs||_inf up to N = 2000
    for n in (50, 500, 2000):
        for rhoT in (0.1, 1.0, 10.0):
            p = GameParams(rho=rhoT, T=1.0, N=n, theta=0.0)
            rhs = rng.standard_normal(p.n_points)
            back = gamma_apply(p, gamma_inverse_apply(p, rhs))
            assert np.max(np.abs(back - rhs)) <= 1e-10 * np.max(np.abs(rhs))


def test_gamma_inverse_of_ones_closed_form():
    # (1 - alpha^2) Gamma^-1 1 = (1-alpha) * (1, 1-alpha, ..., 1-alpha, 1)
    for n, rhoT in [(2, 1.0), (9, 0.3), (60, 4.0)]:
        p = GameParams(rho=rhoT, T=1.0, N=n, theta=0.0)
        a = p.alpha
        lhs = (1.0 - a * a) * gamma_inverse_apply(p, np.ones(p.n_points))
        rhs = (1.0 - a) * np.concatenate(([1.0], np.full(n - 1, 1.0 - a), [1.0]))
        assert rel_inf(lhs, rhs) < 1e-14


def test_gamma_inverse_small_case_vs_dense():
    p = GameParams(rho=2.0 * math.log(2.0), T=1.0, N=2, theta=0.0)  # alpha = 0.5
    mats = build_matrices(p)
    expected = np.linalg.solve(mats.gamma, np.ones(3))
    got = gamma_inverse_apply(p, np.ones(3))
    assert rel_inf(got, expected) < 1e-14
    assert np.allclose(got, [2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0], rtol=1e-14)


def test_gamma_inverse_length_mismatch():
    p = GameParams(rho=1.0, T=1.0, N=4, theta=0.0)
    with pytest.raises(ParameterError, match="length"):
        gamma_inverse_apply(p, np.ones(3))


def test_gamma_positive_definite_cholesky():
    for rhoT in (0.05, 1.0, 12.0):
        p = GameParams(rho=rhoT, T=1.0, N=500, theta=0.0)
        np.linalg.cholesky(build_matrices(p).gamma)  # raises if not PD
