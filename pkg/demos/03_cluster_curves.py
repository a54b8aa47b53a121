"""Zero-cost oscillation envelopes of the renormalized strategies.

At theta = 0 the remaining-inventory curves V^(N) and W^(N) do not converge:
along even grid counts they oscillate between one pair of closed-form
curves, along odd counts between another pair.  This script samples a
finite-N path against its envelope, the classic two-band picture.

Run:  python demos/03_cluster_curves.py [--plot]
"""

import sys

import numpy as np

from impact_game import GameParams, limit_bundle, renormalized_paths

RHO, T, N = 1.0, 1.0, 50

p = GameParams(rho=RHO, T=T, N=N, theta=0.0, x=1.0, y=1.0)
V, W = renormalized_paths(p)
bundle = limit_bundle(RHO, T, 1.0, 1.0)

print(f"theta = 0, N = {N} (even): V and W against the even-parity envelopes")
print()
print(f"{'t':>6} {'V^(N)':>9} {'f_-':>9} {'f_+':>9}   {'W^(N)':>9} {'phi_-':>9} {'phi_+':>9}")
for t in np.linspace(0.1, 0.9, 9):
    tg = V.grid_index(t) * T / N  # evaluate envelopes at the grid point in use
    print(f"{t:6.2f} {V(t):9.4f} {bundle.f_minus(tg):9.4f} {bundle.f_plus(tg):9.4f}"
          f"   {W(t):9.4f} {bundle.phi_minus(tg):9.4f} {bundle.phi_plus(tg):9.4f}")

inside_v = all(
    min(bundle.f_minus(k / N), bundle.f_plus(k / N)) - 5e-2
    <= V(k / N)
    <= max(bundle.f_minus(k / N), bundle.f_plus(k / N)) + 5e-2
    for k in range(1, N)
)
print()
print("V^(N) lies within its envelope (5e-2 slack):", inside_v)

if "--plot" in sys.argv:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ts = np.linspace(0.0, 1.0, 600)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    axes[0].step([k / N for k in range(N + 1)], [W(k / N) for k in range(N + 1)],
                 where="post", lw=1.0, label=f"W^({N})")
    axes[0].plot(ts, bundle.phi_plus(ts), "r", lw=0.9, label="phi_+")
    axes[0].plot(ts, bundle.phi_minus(ts), "r--", lw=0.9, label="phi_-")
    axes[0].set_title("antagonistic component")
    axes[1].step([k / N for k in range(N + 1)], [V(k / N) for k in range(N + 1)],
                 where="post", lw=1.0, label=f"V^({N})")
    axes[1].plot(ts, bundle.f_plus(ts), "r", lw=0.9, label="f_+")
    axes[1].plot(ts, bundle.f_minus(ts), "r--", lw=0.9, label="f_-")
    axes[1].set_title("cooperative component")
    for ax in axes:
        ax.set_xlabel("t")
        ax.legend()
    fig.tight_layout()
    fig.savefig("demo03_envelopes.png", dpi=130)
    print("wrote demo03_envelopes.png")
