"""A quadratic transaction tax: revenues against the burden it creates.

Interpreting theta as a tax rate, the total tax revenue TR_N collected from
both agents asymptotically dominates the total taxation cost TC_N (the
increase of the agents' combined cost over the untaxed game), and the gap
stays strictly positive unless the inventories cancel exactly.

Run:  python demos/04_tax_revenue_vs_cost.py [--plot]
"""

import sys

from impact_game import GameParams, limit_bundle, tax_metrics

RHO, T, THETA = 1.0, 1.0, 0.25
X, Y = 1.0, 0.5
N_LIST = list(range(2, 101))

rows = []
for n in N_LIST:
    p = GameParams(rho=RHO, T=T, N=n, theta=THETA, x=X, y=Y)
    rows.append((n, *tax_metrics(p)))

bundle = limit_bundle(RHO, T, X, Y)
print(f"tax rate theta = {THETA}, x = {X}, y = {Y}, rho*T = {RHO * T}")
print()
print(f"{'N':>4} {'TR_N':>12} {'TC_N':>12}")
for n, tr, tc in rows[:5] + rows[23:26] + rows[-3:]:
    print(f"{n:4d} {tr:12.6f} {tc:12.6f}")

crossover = next((n for n, tr, tc in rows if tr > tc), None)
print()
print(f"TR_N first exceeds TC_N at N = {crossover}")
print(f"TR limit                        : {bundle.tr_limit:.8f}")
print(f"liminf of TR_N - TC_N (formula) : {bundle.tr_minus_tc_liminf:.8f}")
print(f"same formula at x = -y          : {limit_bundle(RHO, T, X, -X).tr_minus_tc_liminf}")

if "--plot" in sys.argv:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot([r[0] for r in rows], [r[1] for r in rows], label="TR_N")
    ax.plot([r[0] for r in rows], [r[2] for r in rows], label="TC_N")
    ax.axhline(bundle.tr_limit, color="k", lw=0.8, ls="--")
    ax.set_xlabel("N")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demo04_tax.png", dpi=130)
    print("wrote demo04_tax.png")
