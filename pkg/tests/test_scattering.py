import numpy as np
import pytest

from conftest import I2
from qcausal import linalg, model
from qcausal.errors import DimensionError
from qcausal.pdm import build_pdm, generate_table, two_time_expectation
from qcausal.scattering import (
    HADAMARD,
    ScatteringCircuit,
    controlled_pauli,
    generate_table_scattering,
    pre_channel_unitary,
    probe_state,
    scattering_expectation,
)

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def test_controlled_pauli():
    assert np.abs(controlled_pauli("X") - CNOT).max() == 0
    assert np.abs(controlled_pauli("I") - np.eye(4)).max() == 0
    for p in linalg.all_pauli_strings(2):
        for first in (True, False):
            cu = controlled_pauli(p, first)
            assert np.abs(cu @ cu - np.eye(8)).max() < 1e-12
    # control on the last qubit: X on the first qubit when the second is |1>
    assert np.abs(controlled_pauli("X", False) @ linalg.ket("01") - linalg.ket("11")).max() == 0


def test_scattering_examples():
    ident = model.identity_channel()
    assert abs(scattering_expectation(ScatteringCircuit("I", "I", ident, I2 / 2)) - 1) < 1e-12
    assert abs(scattering_expectation(ScatteringCircuit("Z", "Z", ident, I2 / 2)) - 1) < 1e-12
    mp = model.measure_prepare_channel()
    circ = ScatteringCircuit("X", "I", mp, model.lambda_plus_state(0.9))
    assert abs(scattering_expectation(circ) - 0.9) < 1e-12
    assert abs(two_time_expectation(model.lambda_plus_state(0.9), mp, "X", "I") - 0.9) < 1e-12


def test_circuit_validation():
    with pytest.raises(DimensionError):
        ScatteringCircuit("ZZ", "Z", model.identity_channel(), I2 / 2)
    with pytest.raises(ValueError):
        ScatteringCircuit("Z", "Z", model.identity_channel(), I2 / 2, probe=1)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
def test_pathway_equivalence_random_channels(lam, rng):
    for _ in range(3):
        sc = model.ScenarioConfig(
            "cause_effect", rho=model.lambda_plus_state(lam), channel=model.random_channel(2, rng)
        )
        a, b = generate_table(sc), generate_table_scattering(sc)
        assert max(abs(a.values[k] - b.values[k]) for k in a.values) <= 1e-10


def test_pathway_equivalence_two_qubit_slots():
    ch = model.tensor_channels(model.partial_swap_channel(3 * np.pi / 8), model.identity_channel())
    ch = model.permute_output(ch, [2, 2], [1, 0])
    rho = np.kron(model.lambda_plus_state(0.9), model.basis_state("0"))
    sc = model.ScenarioConfig("cause_effect", rho=rho, channel=ch)
    a, b = generate_table(sc), generate_table_scattering(sc)
    assert len(b.values) == 256
    assert max(abs(a.values[k] - b.values[k]) for k in a.values) <= 1e-10
    assert all(-1 - 1e-12 <= v <= 1 + 1e-12 for v in b.values.values())
    assert np.abs(build_pdm(a).matrix - build_pdm(b).matrix).max() < 1e-10


def test_scattering_rejects_common_cause():
    with pytest.raises(ValueError):
        generate_table_scattering(model.ScenarioConfig("common_cause", joint=model.bell_state()))


def test_probe_state_is_physical(rng):
    for s1 in ("X", "Y", "Z"):
        circ = ScatteringCircuit(s1, "Y", model.random_channel(2, rng), model.random_density_matrix(2, rng))
        p = probe_state(circ)
        assert abs(np.trace(p) - 1) < 1e-12
        assert np.trace(p @ p).real <= 1 + 1e-12


def test_pre_channel_circuit_is_invertible(rng):
    rho = model.random_density_matrix(4, rng)
    initial = np.kron(model.basis_state("0"), rho)
    for p in linalg.all_pauli_strings(2):
        u = pre_channel_unitary(p, 2)
        mid = u @ initial @ u.conj().T
        assert np.abs(u.conj().T @ mid @ u - initial).max() < 1e-10
    assert np.abs(HADAMARD @ HADAMARD - np.eye(2)).max() < 1e-15
