"""
Partial swap: how the verdict depends on the interaction angle
==============================================================

A (prepared with lam = 0.7) interacts with a fresh |0> through
exp(-i theta SWAP); B is what comes out of the second slot. At theta = 0 and
pi nothing is exchanged and f(R) vanishes; everywhere in between the data
are temporal. At theta = pi/2 the channel is a perfect swap, time-symmetric,
and both orderings are allowed.
"""

import math

from qcausal import model
from qcausal.choi import analyze_pdm
from qcausal.pdm import build_pdm, generate_table

for k in range(9):
    theta = k * math.pi / 8
    v = analyze_pdm(build_pdm(generate_table(model.partial_swap_scenario(0.7, theta)))).verdict
    print(f"theta = {k}pi/8   f(R) = {max(v.f_R, 0):.4f}   f(M_BA) = {max(v.f_BA, 0):.4f}   {v.tag}")

# At theta = 3pi/8, f(R) barely moves as the initial polarization changes.
for lam in (0.0, 0.5, 1.0):
    v = analyze_pdm(build_pdm(generate_table(model.partial_swap_scenario(lam, 3 * math.pi / 8)))).verdict
    print(f"lambda = {lam}: f(R) = {v.f_R:.4f}")
