"""Isotypic blocks of (C^d)^{tensor n} and the universal symmetric state.

Run:  python demos/schur_weyl_tour.py
"""

import numpy as np

from qrenyi import schur_weyl as sw
from qrenyi.operators import distinct_eigenvalue_count, psd_leq, tensor_power
from qrenyi.sampling import random_state

n, d = 3, 2
dec = sw.isotypic_projections(n, d)
print(f"(C^{d})^(x{n}) splits into {len(dec.diagrams)} blocks")
for lam, u, v in zip(dec.diagrams, dec.dims_U, dec.dims_V):
    print(f"  diagram {lam.rows}: dim U = {u}, dim V = {v}, rank = {u * v}")

# character table of S_3 from the Murnaghan-Nakayama rule
classes = [(1, 1, 1), (2, 1), (3,)]
print("\nS_3 characters on classes", classes)
for lam in sw.enumerate_young_diagrams(3, 3):
    print(f"  {lam.parts}: {[sw.sym_character(lam, c) for c in classes]}")

omega = sw.universal_symmetric_state(n, d)
v = sw.v_nd(n, d)
print(f"\nuniversal state: {distinct_eigenvalue_count(omega)} distinct eigenvalues, v_nd = {v}")

rng = np.random.default_rng(7)
ok = all(psd_leq(tensor_power(random_state(d, rng=rng), n), v * omega) for _ in range(20))
print("every sampled sigma^(x n) lies below v_nd * omega:", ok)
