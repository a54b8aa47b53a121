"""Overflow-safe closed forms for the equilibrium linear systems.

The aggregate-system matrix ``B`` (see :func:`b_tridiagonal_bands` in
:mod:`impact_game.equilibrium`) is tridiagonal with constant interior
coefficients, so its leading principal minors ``delta_k`` and trailing
minors ``phi_k`` obey the same second-order linear recursion

    u_k = (1 + alpha**2*(kappa-2) + kappa) * u_prev - alpha**2*kappa*(kappa-1) * u_prevprev

with characteristic roots ``m_plus >= |m_minus|``.  The minors grow like
``m_plus**k`` and overflow double precision near k ~ 700 for typical
parameter values, so every quantity here is stored scaled by the matching
power of ``m_plus``:

    delta_hat[k] = delta_k / m_plus**k          (= c_plus + c_minus*q**k)
    phi_hat[k]   = phi_k / m_plus**(N+2-k)      (= d_plus + d_minus*q**(N+2-k))

with ``q = m_minus/m_plus`` in (-1, 1).  The inverse-entry and component
formulas then combine only the ratios ``q``, ``alpha*kappa/m_plus`` and
``alpha*(kappa-1)/m_plus``, all of modulus < 1, so nothing overflows for
N up to at least 1e5.

Root weights are evaluated through cancellation-free equivalents: e.g. for
``u = 1 - alpha**2*(kappa+2) + kappa`` the identity
``R**2 - u**2 = 8*kappa*alpha**2*(1-alpha**2)`` turns the ill-conditioned
difference ``R - |u|`` into a product, and ``m_minus`` is recovered from the
root product ``m_plus*m_minus = alpha**2*kappa*(kappa-1)`` (exact zero at
kappa == 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .model import GameParams

# Below this distance from kappa == 1 the specialized minor formulas
# (delta_k = 2*(1-alpha**2)*(2-alpha**2)**(k-1)) are used for nu.
KAPPA_ONE_TOL = 1e-9

# Radicand of R is provably >= min(1, 8*(1-kappa)*kappa/(kappa-2)**2) > 0.5
# on the whole parameter domain; anything below this is a programming error.
_RADICAND_CLAMP = -1e-14


class InternalConsistencyError(RuntimeError):
    """A provably-true numeric identity failed beyond roundoff tolerance."""


@dataclass(frozen=True)
class ClosedFormCoefficients:
    """Characteristic roots and recursion weights of the minor sequences.

    Satisfies ``m_plus*m_minus == alpha**2*kappa*(kappa-1)``,
    ``m_plus + m_minus == 1 + alpha**2*(kappa-2) + kappa``,
    ``c_plus + c_minus == 1`` and ``d_plus + d_minus == 1``.
    """

    R: float
    m_plus: float
    m_minus: float
    c_plus: float
    c_minus: float
    d_plus: float
    d_minus: float
    alpha: float
    kappa: float


@dataclass(frozen=True)
class ScaledSequences:
    """Minor sequences scaled by powers of ``m_plus``.

    ``delta_hat[k]`` is valid for k = 0..N+1 (the last entry uses the
    boundary coefficient of the final pivot row).  ``phi_hat[k]`` is valid
    for k = 2..N+2; entries 0 and 1 hold the analytic continuation of the
    same geometric formula and are not used by any consumer.
    ``log_scale = log(m_plus)`` reconstructs magnitudes:
    ``delta_k = delta_hat[k] * exp(k*log_scale)``.
    """

    delta_hat: np.ndarray
    phi_hat: np.ndarray
    log_scale: float


def coefficients(params: GameParams) -> ClosedFormCoefficients:
    """Roots and weights of the minor recursion, cancellation-free."""
    a = params.alpha
    k = params.kappa
    a2 = a * a
    radicand = a2 * a2 * (k - 2.0) ** 2 - 2.0 * a2 * (2.0 + (k - 1.0) * k) + (k + 1.0) ** 2
    if radicand < 0.0:
        if radicand < _RADICAND_CLAMP:
            raise InternalConsistencyError(
                f"root radicand {radicand!r} is negative beyond roundoff "
                f"(alpha={a!r}, kappa={k!r})"
            )
        radicand = 0.0
    R = math.sqrt(radicand)
    trace = 1.0 + a2 * (k - 2.0) + k  # root sum, > 0 on the domain
    m_plus = 0.5 * (trace + R)
    m_minus = a2 * k * (k - 1.0) / m_plus  # root product, avoids trace-R cancellation

    # delta weights: u + R or R - u is ill-conditioned when |u| ~ R, so the
    # small one is rebuilt from R**2 - u**2 = 8*kappa*alpha**2*(1-alpha**2).
    u = 1.0 - a2 * (k + 2.0) + k
    if u >= 0.0:
        c_plus = 0.5 * (u + R) / R
        c_minus = 4.0 * k * a2 * (1.0 - a2) / (R * (R + u))
    else:
        c_plus = 4.0 * k * a2 * (1.0 - a2) / (R * (R - u))
        c_minus = 0.5 * (R - u) / R

    # phi weights: w > 0 always, and R**2 - w**2 = 4*(kappa-1)*alpha**2*(1-alpha**2).
    w = 1.0 + (1.0 - a2) * k
    d_plus = 0.5 * (w + R) / R
    d_minus = 2.0 * (k - 1.0) * a2 * (1.0 - a2) / (R * (R + w))

    return ClosedFormCoefficients(
        R=R, m_plus=m_plus, m_minus=m_minus,
        c_plus=c_plus, c_minus=c_minus, d_plus=d_plus, d_minus=d_minus,
        alpha=a, kappa=k,
    )


def delta_phi_sequences(params: GameParams, coeffs: ClosedFormCoefficients | None = None) -> ScaledSequences:
    """Scaled minor sequences delta_hat (forward) and phi_hat (backward).

    The entries are the exact solutions of the recursion rewritten in ratio
    form, ``u_hat[k] = (1+q)*u_hat[k-1] - q*u_hat[k-2]`` with
    ``q = m_minus/m_plus``; ``delta_hat[N+1]`` applies the modified final
    step ``(1 - alpha**2 + kappa)/m_plus * delta_hat[N] - q*delta_hat[N-1]``
    coming from the last pivot row.
    """
    co = coefficients(params) if coeffs is None else coeffs
    N = params.N
    a2 = co.alpha * co.alpha
    q = co.m_minus / co.m_plus

    k = np.arange(N + 2)
    delta_hat = co.c_plus + co.c_minus * q ** k
    delta_hat[N + 1] = (1.0 - a2 + co.kappa) / co.m_plus * delta_hat[N] - q * delta_hat[N - 1]

    k = np.arange(N + 3)
    phi_hat = co.d_plus + co.d_minus * q ** (N + 2 - k)

    delta_hat.setflags(write=False)
    phi_hat.setflags(write=False)
    return ScaledSequences(delta_hat=delta_hat, phi_hat=phi_hat, log_scale=math.log(co.m_plus))


def b_inverse_entry(params: GameParams, i: int, j: int,
                    seqs: ScaledSequences | None = None,
                    coeffs: ClosedFormCoefficients | None = None) -> float:
    """Entry (i, j) of the inverse of the aggregate tridiagonal matrix.

    Indices are 1-based with 1 <= i, j <= N+1.  Evaluated entirely in ratio
    space: for i <= j the entry is
    ``b**(j-i) * delta_hat[i-1] * phi_hat[j+1] / (delta_hat[N+1] * m_plus)``
    with ``b = alpha*kappa/m_plus``, and symmetrically with
    ``a = alpha*(kappa-1)/m_plus`` for i >= j.
    """
    N = params.N
    if not (1 <= i <= N + 1) or not (1 <= j <= N + 1):
        raise IndexError(f"indices must lie in 1..{N + 1}, got (i, j) = ({i}, {j})")
    co = coefficients(params) if coeffs is None else coeffs
    seq = delta_phi_sequences(params, co) if seqs is None else seqs
    denom = seq.delta_hat[N + 1] * co.m_plus
    if i <= j:
        ratio = co.alpha * co.kappa / co.m_plus
        return ratio ** (j - i) * seq.delta_hat[i - 1] * seq.phi_hat[j + 1] / denom
    ratio = co.alpha * (co.kappa - 1.0) / co.m_plus
    return ratio ** (i - j) * seq.delta_hat[j - 1] * seq.phi_hat[i + 1] / denom


def omega_closed_form(params: GameParams) -> np.ndarray:
    """Closed form of the antagonistic-system solution omega.

    ``omega_i = ((1-alpha)*kappa + alpha*r**(N+1-i)) / (kappa*(kappa - alpha*(kappa-1)))``
    with ``r = alpha*(kappa-1)/kappa`` of modulus < 1; the last component is
    exactly ``1/kappa``.
    """
    a = params.alpha
    k = params.kappa
    r = a * (k - 1.0) / k
    i = np.arange(1, params.N + 2)
    return ((1.0 - a) * k + a * r ** (params.N + 1 - i)) / (k * (k - a * (k - 1.0)))


def _trailing_geometric_sum(ratio: float, values: np.ndarray) -> np.ndarray:
    """t with t[i] = sum_{j >= i} ratio**(j-i) * values[j]."""
    return lfilter([1.0], [1.0, -ratio], values[::-1])[::-1]


def nu_closed_form(params: GameParams) -> np.ndarray:
    """Closed form of the cooperative-system solution nu, O(N) total.

    The two inner index sums per component are accumulated by the geometric
    recursions S1[i+1] = a*(S1[i] + delta_hat[i-1]) and
    S2[i] = phi_hat[i+1] + b*S2[i+1], so the whole vector costs O(N) and all
    intermediates stay bounded by O(N) in magnitude.

    At kappa == 1 (dispatched for |kappa-1| < 1e-9) the minors collapse to a
    single geometric sequence and the specialized two-term formulas are used
    instead.
    """
    N = params.N
    a_ = params.alpha
    if abs(params.kappa - 1.0) < KAPPA_ONE_TOL:
        r1 = a_ / (2.0 - a_ * a_)
        nu = np.empty(N + 1)
        nu[0] = (1.0 + 0.5 * (2.0 - a_ * a_) * r1 ** (N + 1)) / (2.0 + a_)
        i = np.arange(2, N + 2)
        nu[1:] = ((1.0 - a_) + (1.0 - a_ * a_) * r1 ** (N + 2 - i)) / (2.0 + a_)
        return nu

    co = coefficients(params)
    seq = delta_phi_sequences(params, co)
    dh, ph = seq.delta_hat, seq.phi_hat
    a = a_ * (co.kappa - 1.0) / co.m_plus
    b = a_ * co.kappa / co.m_plus
    one_m_alpha = 1.0 - a_

    # S1[i] = sum_{j=2}^{i-1} a**(i-j) * delta_hat[j-1], needed for i = 2..N+1
    s1 = np.zeros(N + 2)
    if N >= 2:
        s1[3:] = lfilter([a], [1.0, -a], dh[1:N])
    # S2[i] = sum_{j=i}^{N} b**(j-i) * phi_hat[j+1], needed for i = 1..N
    s2 = np.zeros(N + 2)
    s2[1 : N + 1] = _trailing_geometric_sum(b, ph[2 : N + 2])

    pref = one_m_alpha / (dh[N + 1] * co.m_plus)
    nu = np.empty(N + 1)
    nu[0] = pref * (ph[2] + one_m_alpha * b * s2[2] + b ** N)
    i = np.arange(2, N + 1)
    nu[1:N] = pref * (
        a ** (i - 1) * ph[i + 1]
        + one_m_alpha * (ph[i + 1] * s1[i] + dh[i - 1] * s2[i])
        + b ** (N + 1 - i) * dh[i - 1]
    )
    nu[N] = pref * (a ** N + one_m_alpha * s1[N + 1] + dh[N])
    return nu
