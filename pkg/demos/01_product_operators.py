"""
Product operators for three spins
=================================

Every traceless 8x8 Hermitian matrix is a real combination of the 63
non-trivial Pauli products. Here we build a few of them, expand a
matrix back into that basis and look at coherence orders.
"""

import numpy as np

from nmr_eraser import spin_core as sc

# Spin 1 is the most significant bit, so sz1 is +1 on the first four kets
sz1 = sc.embed_pauli(3, 1, "z")
print("diag(sz1) =", np.diag(sz1).real)

# A product operator from its label string, one character per spin
xxx = sc.product_operator("xxx")
print("xxx has", np.count_nonzero(xxx), "non-zero entries")

# Expand a matrix and print the terms
rho = 0.5 * xxx - 0.25 * sz1 + 0.1 * sc.product_operator("1yz")
for term in sc.decompose(rho):
    print(term.pretty())

# <000|rho|111> carries coherence order 3, <001|rho|010> is zero quantum
print("order(000,111) =", sc.coherence_order(0b000, 0b111, 3))
print("order(001,010) =", sc.coherence_order(0b001, 0b010, 3))
print(sc.coherence_order_matrix(3))
