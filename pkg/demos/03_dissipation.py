"""
Fidelity against auxiliary-level decay
======================================

The shorter the time spent in |a>, the less decay hurts.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from holosim import Protocol
from holosim.harness import RunConfig, SweepSpec, run_sweep

cfg = RunConfig(rabi_khz=47.1)
rows = run_sweep(cfg, SweepSpec("kappa", 0.0, 100.0, 11))

for proto in Protocol:
    sel = [r for r in rows if r["protocol"] == proto.value]
    k = np.array([r["param_value"] for r in sel])
    f = np.array([r["state_fidelity"] for r in sel])
    plt.plot(k, f, "o-", label=f"{proto.value} (A = {sel[0]['accumulated_pa_us']:.2f} us)")
plt.xlabel("kappa (kHz)")
plt.ylabel("state fidelity")
plt.legend()
plt.savefig("dissipation.png", dpi=120)
