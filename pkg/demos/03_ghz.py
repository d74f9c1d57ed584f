"""
Preparing the GHZ state
=======================

A pi/2 pulse on the middle spin followed by the c-NOT pair turns |000>
into (|000> + |111>)/sqrt(2). On the pseudo-pure deviation it gives seven
product operators.
"""

import numpy as np

from nmr_eraser import dynamics as dy
from nmr_eraser import spin_core as sc
from nmr_eraser import state_prep as sp

u = sp.ghz_propagator()
print("U|000> =", np.round(u @ sc.ket("000"), 6))

ghz = dy.conjugate(u, sp.pseudo_pure_target())
for term in sc.decompose(ghz, 1e-12):
    print(term.pretty())

# Only the spin-3 c-NOT: spins 2 and 3 share a Bell pair, spin 1 stays up
print("Bell precursor:", np.round(sp.bell_precursor_ket(), 6))
