"""
Pseudo-pure state from thermal equilibrium
==========================================

Starting from sz1 + sz2 + sz3, four rows of pulses and gradients leave a
deviation proportional to |000><000| - I/8. We print the expansion after
every row.
"""

import numpy as np

from nmr_eraser import spin_core as sc
from nmr_eraser import state_prep as sp

rho = sp.thermal_deviation()
print("thermal:", " ".join(t.pretty() for t in sc.decompose(rho)))

trace = []
out = sp.pseudo_pure_prep(rho, trace=trace)
for name, m in trace:
    print(f"{name}:", " ".join(t.pretty() for t in sc.decompose(m, 1e-10)))

a = sp.PPS_AMPLITUDE
print(f"amplitude a = {a:.6f}")
print("matches 8a(|000><000| - I/8):", np.allclose(out, sp.pseudo_pure_target()))
print("Tr(rho^2) =", np.trace(out @ out).real)
