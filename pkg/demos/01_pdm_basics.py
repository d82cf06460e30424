"""
Pseudo-density matrices from two-time correlators
=================================================

A qubit measured twice with nothing in between (identity channel) on the
maximally mixed state gives perfectly correlated outcomes for every Pauli.
The PDM built from those correlators is SWAP/2, which has a negative
eigenvalue: no joint state of two qubits can produce that table.
"""

import numpy as np

from qcausal import model
from qcausal.pdm import build_pdm, generate_table, marginal_at_time, negativity, time_reverse

scenario = model.ScenarioConfig("cause_effect", rho=np.eye(2) / 2, channel=model.identity_channel())
table = generate_table(scenario)
print("<Z, Z> =", table["Z", "Z"], "  <X, Z> =", table["X", "Z"])

r = build_pdm(table)
print("PDM:\n", np.round(r.matrix.real, 3))
print("eigenvalues:", np.round(np.linalg.eigvalsh(r.matrix), 3))
print("f(R) =", negativity(r))

# Each time slot on its own still looks like an ordinary state.
print("slot-1 marginal:\n", np.round(marginal_at_time(r, 1).real, 3))

# A correlated joint state measured at a single time never has negativity.
bell = generate_table(model.ScenarioConfig("common_cause", joint=model.bell_state()))
print("f(R) for a Bell state, common cause:", round(negativity(build_pdm(bell)), 12))

# Swapping the time slots leaves the spectrum (and f) unchanged.
print("f(time-reversed R) =", negativity(time_reverse(r)))
