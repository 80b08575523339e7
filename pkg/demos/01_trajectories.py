"""
Population dynamics of the three gate protocols
===============================================

Drive the sqrt(X) gate from |g> with weak decay and watch how much
population visits the auxiliary level on the way.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from holosim import Protocol
from holosim.harness import RunConfig, run_trajectory

cfg = RunConfig(rabi_khz=47.1, kappa_khz=5.0, record_stride=20)

fig, axes = plt.subplots(3, 1, figsize=(6, 7), sharex=True)
for ax, proto in zip(axes, Protocol):
    rows = run_trajectory(cfg, proto)
    t = np.array([r["t_us"] for r in rows])
    for col in ("p_e", "p_g", "p_a"):
        ax.plot(t, [r[col] for r in rows], label=col)
    ax.set_title(proto.value)
    print(f"{proto.value:7s} duration {t[-1]:.3f} us, final fidelity {rows[-1]['fidelity_to_target']:.4f}")
axes[0].legend()
axes[-1].set_xlabel("t (us)")
fig.tight_layout()
fig.savefig("trajectories.png", dpi=120)
