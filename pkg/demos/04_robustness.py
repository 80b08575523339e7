"""
Static detuning and Rabi amplitude errors
=========================================

Strong decay, moderate drive. Sweep each systematic error over +-20 %
of the Rabi frequency and print the endpoint asymmetry.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from holosim.harness import RunConfig, SweepSpec, run_sweep, asymmetry

cfg = RunConfig(rabi_khz=33.3, kappa_khz=66.7)

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, param in zip(axes, ("delta", "delta_omega")):
    rows = run_sweep(cfg, SweepSpec.default(param))
    for proto in ("NHQC", "BNHQC", "CBNHQC"):
        sel = [r for r in rows if r["protocol"] == proto]
        ax.plot([r["param_value"] for r in sel], [r["state_fidelity"] for r in sel], label=proto)
    ax.set_xlabel(param + " / Omega")
    for a in asymmetry(rows):
        if abs(a["abs_value"] - 0.2) < 1e-12:
            print(f"{param:11s} {a['protocol']:7s} F(+0.2) - F(-0.2) = {a['difference']:+.4f}")
axes[0].set_ylabel("state fidelity")
axes[0].legend()
fig.savefig("robustness.png", dpi=120)
