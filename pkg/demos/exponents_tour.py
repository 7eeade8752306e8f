"""Strong converse exponents: a binary symmetric channel, a qubit channel and
the depolarizing channel.

Run:  python demos/exponents_tour.py
"""

import math

import numpy as np

from qrenyi import exponents as ex
from qrenyi.channels import CqChannel, holevo_quantity

eps = 0.1
bsc = CqChannel.from_states([np.diag([1 - eps, eps]), np.diag([eps, 1 - eps])])
cap = holevo_quantity(bsc)
print(f"BSC({eps}) capacity {cap:.6f} nats")
print(ex.exponent_curve(bsc, [0.3, 0.4, 0.5, 0.6, 0.69]).to_csv())

# Dueck-Korner form against the flat Hoeffding expression
W = CqChannel.from_states([np.diag([0.95, 0.05]), 0.45 * np.ones((2, 2)) + 0.05 * np.eye(2)])
P = [0.5, 0.5]
R = holevo_quantity(W, P) + 0.2
F = ex.dueck_korner_F(W, P, R)
H = ex.flat_hoeffding_form2(W, P, R)
print(f"F = {F.value:.8f}, flat Hoeffding = {H.value:.8f}")

# depolarizing channel: minimum output entropy route vs the induced cq-channel
Phi = ex.depolarizing_channel(0.2)
for R in (0.45, 0.6, 0.8):
    kw = ex.kw_exponent(Phi, R, kw_class=True).sc
    direct = ex.sc_exponent(ex.induced_cq_channel(Phi), R).value
    print(f"R={R}: min-entropy route {kw:.6f}, cq route {direct:.6f}")

print("identity channel at R = 1:", ex.kw_exponent(ex.identity_channel(), 1.0, kw_class=True).sc,
      "expected", 1 - math.log(2))
