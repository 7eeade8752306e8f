"""Holevo quantities, Renyi capacities and divergence radii of a qubit channel.

Run:  python demos/capacities_tour.py
"""

import numpy as np

from qrenyi import channels as ch
from qrenyi.divergences import PETZ, SANDWICHED

zero = np.diag([1.0, 0.0])
plus = 0.5 * np.ones((2, 2))
W = ch.CqChannel.from_states([0.9 * zero + 0.05 * np.eye(2), 0.9 * plus + 0.05 * np.eye(2)], ["0", "+"])

print(f"Holevo quantity at the uniform prior: {ch.holevo_quantity(W):.6f}")

# generic sigma-optimizer against the closed form for the petz family
for a in (1.5, 2.0):
    generic = ch.chi_alpha(W, None, a, PETZ, 1)
    closed = ch.chi_alpha(W, None, a, PETZ, 1, method="sibson")
    print(f"alpha={a}: petz chi generic {generic.value:.8f}, closed form {closed.value:.8f}")

# capacity two ways plus the radius with its duality gap
for a in (1.5, 2.0, 3.0):
    c1 = ch.renyi_capacity(W, a, SANDWICHED, 1)
    c2 = ch.renyi_capacity(W, a, SANDWICHED, 2)
    rad = ch.divergence_radius(W, a, SANDWICHED)
    print(f"alpha={a}: form1 {c1.value:.6f}  form2 {c2.value:.6f}  radius {rad.value:.6f} (gap {rad.gap:.1e})")

print(f"alpha=inf: {ch.capacity_infinity(W, SANDWICHED):.6f}")
