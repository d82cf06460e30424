"""Probe-qubit scattering circuit for two-time correlators.

The probe (register qubit 0) is put in |+>, controls s1 on the system before
the channel and s2 after it, and is rotated back with a Hadamard. Its final
<Z> equals the coarse-grained two-time correlator, so the table can be
gathered without ever projecting the system itself.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import PauliString, all_pauli_strings, pauli_matrix
from .model import Channel, ScenarioConfig, num_qubits
from .pdm import ExpectationTable

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)
Z = np.diag([1, -1]).astype(complex)


def controlled_pauli(p, control_first: bool = True) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) P, or the mirrored layout with the control last."""
    m = pauli_matrix(p)
    eye = np.eye(m.shape[0], dtype=complex)
    if control_first:
        return np.kron(P0, eye) + np.kron(P1, m)
    return np.kron(eye, P0) + np.kron(m, P1)


@dataclass(frozen=True)
class ScatteringCircuit:
    """Probe on qubit 0, system register on qubits 1..n.

    The channel maps the slot-1 register onto the slot-2 register in place,
    so both slots occupy the same system qubit positions.
    """

    s1: PauliString
    s2: PauliString
    channel: Channel
    rho: np.ndarray
    probe: int = 0

    def __post_init__(self):
        object.__setattr__(self, "s1", PauliString(str(self.s1)))
        object.__setattr__(self, "s2", PauliString(str(self.s2)))
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        if self.probe != 0:
            raise ValueError("the probe occupies register qubit 0")
        if 2**self.s1.n != rho.shape[0] or self.channel.dim_in != rho.shape[0]:
            raise DimensionError("slot-1 operator, state and channel input disagree")
        if 2**self.s2.n != self.channel.dim_out:
            raise DimensionError("slot-2 operator and channel output disagree")

    @property
    def slot1_qubits(self) -> tuple:
        return tuple(range(1, 1 + self.s1.n))

    @property
    def slot2_qubits(self) -> tuple:
        return tuple(range(1, 1 + self.s2.n))


def pre_channel_unitary(s1, n: int) -> np.ndarray:
    """Hadamard on the probe followed by the probe-controlled s1."""
    return controlled_pauli(s1) @ np.kron(HADAMARD, np.eye(2**n, dtype=complex))


def scattering_final_state(c: ScatteringCircuit) -> np.ndarray:
    state = np.kron(P0, c.rho)
    u1 = pre_channel_unitary(c.s1, c.s1.n)
    state = u1 @ state @ u1.conj().T
    # channel on the system only; the probe is noiseless
    state = sum(
        np.kron(np.eye(2), k) @ state @ np.kron(np.eye(2), k).conj().T for k in c.channel.kraus
    )
    d_out = c.channel.dim_out
    u2 = np.kron(HADAMARD, np.eye(d_out)) @ controlled_pauli(c.s2)
    return u2 @ state @ u2.conj().T


def probe_state(c: ScatteringCircuit) -> np.ndarray:
    state = scattering_final_state(c)
    d = c.channel.dim_out
    return np.trace(state.reshape(2, d, 2, d), axis1=1, axis2=3)


def scattering_expectation(c: ScatteringCircuit) -> float:
    """<Z> of the probe at the end of the circuit."""
    return float(np.trace(Z @ probe_state(c)).real)


def generate_table_scattering(scenario: ScenarioConfig) -> ExpectationTable:
    """Full correlator table, every entry read off a simulated probe."""
    if scenario.kind != "cause_effect":
        raise ValueError(f"scattering pathway needs a cause_effect scenario, got {scenario.kind}")
    n1 = num_qubits(scenario.channel.dim_in)
    n2 = num_qubits(scenario.channel.dim_out)
    table = ExpectationTable(n1, n2)
    for s1 in all_pauli_strings(n1):
        for s2 in all_pauli_strings(n2):
            circ = ScatteringCircuit(s1, s2, scenario.channel, scenario.rho)
            table.values[(s1.index, s2.index)] = scattering_expectation(circ)
    return table
