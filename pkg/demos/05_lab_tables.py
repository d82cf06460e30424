"""
Classifying a measured table
============================

Real data arrive as a CSV of correlators with header i1_labels,i2_labels,value.
Finite statistics blur the zeros of the decision table, so the threshold eps
has to be chosen explicitly. The forward Choi matrix of the decohering
channel sits on the edge of positivity (it has zero eigenvalues), so shot
noise shows up directly as spurious f(M_AB): with eps = 0.02, 2e4 shots per
correlator are usually not enough and 1e6 are.
"""

import tempfile
from pathlib import Path

import numpy as np

from qcausal import model
from qcausal.harness import import_lab_table
from qcausal.pdm import generate_table

with tempfile.TemporaryDirectory() as tmp:
    for shots in (20_000, 1_000_000):
        noisy = generate_table(model.decohering_scenario(0.7), shots=shots, rng=np.random.default_rng(1))
        path = Path(tmp) / f"lab_{shots}.csv"
        noisy.to_csv(path)
        verdict = import_lab_table(path, eps=0.02)
        print(f"--- {shots} shots per correlator")
        print(verdict.to_record(), end="")

    print("--- first rows of the table file")
    print("\n".join(path.read_text().splitlines()[:4]))

    # The same data with the time labels swapped point the other way.
    swapped = Path(tmp) / "swapped.csv"
    noisy.swapped().to_csv(swapped)
    print("swapped slots:", import_lab_table(swapped, eps=0.02).tag)
