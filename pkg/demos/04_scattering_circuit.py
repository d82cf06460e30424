"""
Reading correlators off a probe qubit
=====================================

The scattering circuit never measures the system: a probe in |+> controls
s1 before the channel and s2 after it, and its final <Z> is the two-time
correlator. Here the whole table of a four-qubit layout (A, C at t1; D, B at
t2) is gathered that way and compared with the closed-form route, then
reduced to the A/B PDM used for the verdict.
"""

import math

import numpy as np

from qcausal import model
from qcausal.choi import analyze_pdm
from qcausal.pdm import build_pdm, generate_table, reduce_pdm
from qcausal.scattering import ScatteringCircuit, generate_table_scattering, scattering_expectation

circ = ScatteringCircuit("X", "I", model.measure_prepare_channel(), model.lambda_plus_state(0.9))
print("probe <Z> for <X, I> at lambda = 0.9:", round(scattering_expectation(circ), 12))

channel = model.tensor_channels(model.partial_swap_channel(3 * math.pi / 8), model.identity_channel())
channel = model.permute_output(channel, [2, 2], [1, 0])
rho = np.kron(model.lambda_plus_state(0.9), model.basis_state("0"))
scenario = model.ScenarioConfig("cause_effect", rho=rho, channel=channel)

probe_table = generate_table_scattering(scenario)
exact_table = generate_table(scenario)
gap = max(abs(probe_table.values[k] - exact_table.values[k]) for k in exact_table.values)
print(f"{len(probe_table.values)} correlators, largest pathway difference {gap:.1e}")

r_full = build_pdm(probe_table)
r_ab = reduce_pdm(r_full, keep_t1=[0], keep_t2=[1])
print("R_ACDB is", r_full.matrix.shape, "; R_AB eigenvalues:", np.round(np.linalg.eigvalsh(r_ab.matrix), 4))
print("verdict on R_AB:", analyze_pdm(r_ab).verdict.tag)
