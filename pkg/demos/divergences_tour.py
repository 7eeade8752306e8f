"""Three quantum Renyi divergences on one qubit pair.

Run:  python demos/divergences_tour.py
"""

import numpy as np

from qrenyi import divergences as dv
from qrenyi.operators import pinch, pinching_from

rho = 0.5 * np.ones((2, 2))          # |+><+|
sigma = np.diag([0.25, 0.75])

# quasi-entropies at alpha = 2: flat <= sandwiched <= petz
for variant in (dv.FLAT, dv.SANDWICHED, dv.PETZ):
    print(f"Q_2 {variant.value:>10}: {dv.q_alpha(rho, sigma, 2, variant):.6f}")

# the divergences as functions of alpha
alphas = [0.5, 0.9, 1.0, 1.5, 2.0, 4.0, np.inf]
print("\nalpha   " + "  ".join(f"{v.value:>10}" for v in (dv.FLAT, dv.SANDWICHED, dv.PETZ)))
for a in alphas:
    vals = [dv.d_alpha(rho, sigma, a, v) for v in (dv.FLAT, dv.SANDWICHED, dv.PETZ)]
    print(f"{a:<7}" + "  ".join(f"{x:10.5f}" for x in vals))

# flat family: the Hellinger arc attains the variational minimum
tau = dv.hellinger_arc(np.diag([0.6, 0.4]) + 0.1 * np.array([[0, 1], [1, 0]]), sigma, 2.0)
print("\nHellinger arc at alpha = 2:\n", np.round(tau, 6))

# pinching by sigma can raise the flat quantity: it is not monotone under channels
s17 = np.diag([1 / 17, 16 / 17])
before = dv.q_alpha(rho, s17, 2, dv.FLAT)
after = dv.q_alpha(pinch(pinching_from(s17), rho), s17, 2, dv.FLAT)
print(f"\nQ_2 flat before pinching {before:.4f}, after {after:.4f}")

# pinched divergences of n copies climb toward the sandwiched value
star = dv.d_alpha(rho, sigma, 2, dv.SANDWICHED)
for n in (1, 2, 3, 4, 6):
    print(f"n={n}: pinched {dv.pinched_divergence(rho, sigma, 2, n):.5f}  (sandwiched {star:.5f})")
