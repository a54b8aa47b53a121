"""The continuous-time equilibrium at the critical cost level.

At theta = 1/4 (and only there) the game has a continuous-time Nash
equilibrium: a block trade at time 0, smooth trading in between, and a
block at T that carries the inventory difference.  Its optimality
certificate is the constancy of each agent's first-order-condition curve,
and its cost equals the high-frequency limit of the discrete costs.

Run:  python demos/05_continuous_time.py
"""

import numpy as np

from impact_game import (
    GameParams,
    continuous_cost,
    continuous_equilibrium,
    discretize_strategy,
    equilibrium_strategies,
    fredholm_residual,
    limit_bundle,
)

RHO, T, X0, Y0 = 1.0, 1.0, 1.0, 0.5

X, Y = continuous_equilibrium(RHO, T, X0, Y0)
print(f"rho = {RHO}, T = {T}, inventories ({X0}, {Y0})")
print()
print(f"shared block at t=0          : {X.jump_at_0:+.6f}")
print(f"terminal blocks (agent 1, 2) : {X.jump_at_T:+.6f}, {Y.jump_at_T:+.6f}")
print(f"inventory right after t=0    : {X.value(0.0):.6f} / {Y.value(0.0):.6f}")
print(f"inventory at T               : {X.value(T):.2e} / {Y.value(T):.2e}")

print()
print("First-order-condition constancy at several cost levels")
print(f"{'theta':>7} {'max deviation':>15} {'constant (agent 1)':>20}")
for theta in (0.0, 0.1, 0.25, 0.5):
    rep = fredholm_residual(RHO, T, X0, Y0, theta, n_grid=64)
    print(f"{theta:7.2f} {rep.max_abs_deviation:15.3e} {rep.constant_estimate_agent1:20.12f}")
rep = fredholm_residual(RHO, T, X0, Y0, 0.25, n_grid=64)
print(f"analytic constant at theta = 1/4 : {rep.analytic_constant_agent1:.12f}")

cc = continuous_cost(RHO, T, X0, Y0)
lim = limit_bundle(RHO, T, X0, Y0).cost_limit_pos
print()
print(f"continuous equilibrium cost  : {cc:.15f}")
print(f"high-frequency cost limit    : {lim:.15f}")
print(f"difference                   : {abs(cc - lim):.2e}")

print()
print("Discretizing the continuous path approaches the discrete equilibrium:")
for n in (25, 100, 400):
    p = GameParams(rho=RHO, T=T, N=n, theta=0.25, x=X0, y=Y0)
    gap = np.max(np.abs(discretize_strategy(X, n) - equilibrium_strategies(p).xi_star))
    print(f"  N = {n:4d}: sup gap to discrete equilibrium trades {gap:.3e}")
