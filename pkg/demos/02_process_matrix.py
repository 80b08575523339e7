"""
Process matrix of a noisy sqrt(X)
=================================

Four input states, linear inversion, then compare with the ideal chi.
"""

import numpy as np

from holosim import Protocol
from holosim.harness import RunConfig, run_tomography
from holosim.linalg import PAULI_LABELS

np.set_printoptions(precision=4, suppress=True)

cfg = RunConfig(rabi_khz=47.1, kappa_khz=5.0)
for proto in Protocol:
    out = run_tomography(cfg, proto)
    print(proto.value, "process fidelity", round(out["process_fidelity"], 5))

# the last one in detail
print("basis", PAULI_LABELS)
print("Re chi\n", out["chi"].real)
print("Im chi\n", out["chi"].imag)

# finite shots scatter the estimate; projection keeps it physical
noisy = RunConfig(rabi_khz=47.1, kappa_khz=5.0, shots=2000, seed=7)
res = run_tomography(noisy, Protocol.CBNHQC)
print("2000 shots:", res["process_fidelity"], "projected:", res["process_fidelity_projected"])
