"""Expected costs as a function of trading frequency.

Reproduces the central comparative statics: with zero transaction costs the
expected cost oscillates forever between two parity-dependent cluster
values, while any positive cost level sends it to a single limit that does
not depend on the level itself.  For rho*T above roughly 0.69 that limit is
strictly below both zero-cost cluster values, so adding transaction costs
makes every market participant better off at high trading frequency.

Run:  python demos/02_high_frequency_costs.py [--plot]
"""

import sys

from impact_game import (
    GameParams,
    convergence_study,
    cost_comparison_predicate,
    limit_bundle,
)

RHO, T = 1.0, 1.0
N_LIST = list(range(2, 61))

bundle = limit_bundle(RHO, T, x=1.0, y=1.0)
print("rho*T = 1, inventories x = y = 1")
print()

curves = {}
for theta in (0.0, 0.05, 0.25):
    base = GameParams(rho=RHO, T=T, N=2, theta=theta, x=1.0, y=1.0)
    rows, trend = convergence_study(base, N_LIST)
    curves[theta] = rows
    tail = rows[-1]
    print(f"theta = {theta:4.2f}: cost at N=2  {rows[0].cost:.6f}   at N={tail.N}  {tail.cost:.6f}"
          f"   |err vs limit| {tail.abs_error:.2e}")

print()
print(f"positive-level cost limit      : {bundle.cost_limit_pos:.9f}")
print(f"zero-level cluster value (even): {bundle.cost_limit_even:.9f}")
print(f"zero-level cluster value (odd) : {bundle.cost_limit_odd:.9f}")

print()
print("Does a positive cost level beat the zero-cost limit inferior?")
for z in (0.3, 0.5, 0.69, 0.7, 1.0, 3.0, 6.0):
    holds, margin = cost_comparison_predicate(z, 1.0, 1.0)
    verdict = "yes" if holds else "no "
    print(f"  rho*T = {z:4.2f}: {verdict} (margin {margin:+.3e})")

if "--plot" in sys.argv:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for theta, rows in curves.items():
        ax.plot([r.N for r in rows], [r.cost for r in rows], label=f"theta = {theta}")
    ax.axhline(bundle.cost_limit_pos, color="k", lw=0.8, ls="--", label="positive-level limit")
    ax.set_xlabel("N")
    ax.set_ylabel("expected cost of agent 1")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demo02_costs.png", dpi=130)
    print("wrote demo02_costs.png")
