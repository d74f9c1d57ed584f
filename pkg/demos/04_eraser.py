"""
Erasing the which-path record with gradients
============================================

Four gradients with pi pulses on spins 2 and 3 in between leave only a
position dependent z rotation of spin 1. Averaged over the sample this
dephases spin 1 alone, which is a z measurement of the ancilla. A leading
pi/2 pulse turns it into an x measurement.
"""

import numpy as np

from nmr_eraser import decoherence as dc
from nmr_eraser import spin_core as sc
from nmr_eraser import state_prep as sp
from nmr_eraser import tomography as tomo

ens = dc.SpatialEnsemble(64)
ghz = sp.ghz_target()

rho_z = dc.selective_dephase_z(ghz, ens)
rho_x = dc.selective_dephase_x(ghz, ens)
print("after z erasure:", " ".join(t.pretty() for t in sc.decompose(rho_z, 1e-10)))
print("after x erasure:", " ".join(t.pretty() for t in sc.decompose(rho_x, 1e-10)))

# Per slice the whole sequence is exp(-i phi sz1 / 2)
seq = dc.eraser_z_sequence()
u = seq.compile(ens.positions[5])
print("slice 5 propagator diagonal:", np.round(np.diag(u), 4))

# Spins 2 and 3 alone cannot tell the three states apart
for name, rho in sp.measurement_mixtures().items():
    print(name, np.round(sc.partial_trace(rho, [2, 3]).real, 3).diagonal())

print("c(z vs GHZ) =", tomo.attenuated_correlation(rho_z, ghz))
