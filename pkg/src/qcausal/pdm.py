"""Two-time correlators and pseudo-density matrices.

A pseudo-density matrix (PDM) over two time slots is assembled from the table
of two-time Pauli correlators <s1, s2> as

    R = 2^-(n1 + n2) * sum_{s1, s2} <s1, s2> s1 (x) s2.

It is Hermitian with unit trace but can have negative eigenvalues; those
signal correlations that no single-time joint state can produce.
"""

import csv
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import linalg
from .errors import DimensionError, IncompleteTableError, NonPositiveMarginalError
from .linalg import PauliString, all_pauli_strings, pauli_matrix
from .model import Channel, ScenarioConfig, apply_channel
from .tolerances import DEFAULT

CSV_HEADER = ["i1_labels", "i2_labels", "value"]


@dataclass
class ExpectationTable:
    """Correlators keyed by ``(i1, i2)`` Pauli indices for slots of n1 and n2 qubits."""

    n1: int
    n2: int
    values: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        if self.n1 != self.n2:
            raise DimensionError(f"slots differ in size ({self.n1} vs {self.n2})")
        return self.n1

    def __getitem__(self, key):
        i1, i2 = key
        if isinstance(i1, (str, PauliString)):
            i1 = PauliString(str(i1)).index
        if isinstance(i2, (str, PauliString)):
            i2 = PauliString(str(i2)).index
        return self.values[(i1, i2)]

    def __setitem__(self, key, value):
        i1, i2 = key
        if isinstance(i1, (str, PauliString)):
            i1 = PauliString(str(i1)).index
        if isinstance(i2, (str, PauliString)):
            i2 = PauliString(str(i2)).index
        self.values[(i1, i2)] = float(value)

    def missing(self) -> list:
        return [
            (i1, i2)
            for i1, i2 in product(range(4**self.n1), range(4**self.n2))
            if (i1, i2) not in self.values
        ]

    def is_complete(self) -> bool:
        return len(self.values) == 4 ** (self.n1 + self.n2) and not self.missing()

    def check(self, atol=DEFAULT.exact):
        """Raise if the table is incomplete, unnormalized, or out of range."""
        miss = self.missing()
        if miss:
            raise IncompleteTableError(
                [(PauliString.from_index(self.n1, a).labels, PauliString.from_index(self.n2, b).labels)
                 for a, b in miss]
            )
        if abs(self.values[(0, 0)] - 1) > atol:
            raise ValueError(
                f"normalization violated: <I, I> = {self.values[(0, 0)]}, expected 1"
            )
        bad = [k for k, v in self.values.items() if abs(v) > 1 + atol]
        if bad:
            a, b = bad[0]
            raise ValueError(
                f"{len(bad)} correlators exceed 1 in magnitude, e.g. "
                f"({PauliString.from_index(self.n1, a)},{PauliString.from_index(self.n2, b)})"
                f" = {self.values[bad[0]]}"
            )

    def combine(self, other: "ExpectationTable", p: float) -> "ExpectationTable":
        """Convex combination ``p * self + (1 - p) * other``."""
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise DimensionError("cannot combine tables over different registers")
        keys = self.values.keys() | other.values.keys()
        vals = {k: p * self.values.get(k, 0.0) + (1 - p) * other.values.get(k, 0.0) for k in keys}
        return ExpectationTable(self.n1, self.n2, vals)

    def subtable(self, keep_t1, keep_t2) -> "ExpectationTable":
        """Entries with identities on all discarded qubits, re-indexed to the kept qubits."""
        keep_t1, keep_t2 = sorted(set(keep_t1)), sorted(set(keep_t2))
        _check_subset(keep_t1, self.n1)
        _check_subset(keep_t2, self.n2)
        vals = {}
        for s1 in all_pauli_strings(len(keep_t1)) if keep_t1 else []:
            for s2 in all_pauli_strings(len(keep_t2)) if keep_t2 else []:
                full1 = _embed(s1.labels, keep_t1, self.n1)
                full2 = _embed(s2.labels, keep_t2, self.n2)
                key = (PauliString(full1).index, PauliString(full2).index)
                if key in self.values:
                    vals[(s1.index, s2.index)] = self.values[key]
        return ExpectationTable(len(keep_t1), len(keep_t2), vals)

    def swapped(self) -> "ExpectationTable":
        """The same data with the two time slots exchanged."""
        return ExpectationTable(self.n2, self.n1, {(b, a): v for (a, b), v in self.values.items()})

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for (i1, i2) in sorted(self.values):
                w.writerow([
                    PauliString.from_index(self.n1, i1).labels,
                    PauliString.from_index(self.n2, i2).labels,
                    repr(float(self.values[(i1, i2)])),
                ])

    @classmethod
    def from_csv(cls, path) -> "ExpectationTable":
        try:
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as exc:
            raise OSError(f"cannot read expectation table {path}: {exc}") from exc
        if not rows or [c.strip() for c in rows[0]] != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        body = [r for r in rows[1:] if r]
        if not body:
            raise ValueError(f"{path}: no data rows")
        n1, n2 = len(body[0][0].strip()), len(body[0][1].strip())
        table = cls(n1, n2)
        for lineno, row in enumerate(body, start=2):
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            a, b, v = (c.strip() for c in row)
            if len(a) != n1 or len(b) != n2:
                raise ValueError(f"{path}:{lineno}: label lengths differ from the first row")
            key = (PauliString(a).index, PauliString(b).index)
            if key in table.values:
                raise ValueError(f"{path}:{lineno}: duplicate entry ({a},{b})")
            table.values[key] = float(v)
        return table


def _check_subset(keep, n):
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"subsystem indices {keep} invalid for a {n}-qubit slot")


def _embed(labels, keep, n):
    out = ["I"] * n
    for pos, c in zip(keep, labels):
        out[pos] = c
    return "".join(out)


@dataclass(frozen=True)
class PDM:
    """Pseudo-density matrix over slots of ``n1`` and ``n2`` qubits."""

    matrix: np.ndarray
    n1: int
    n2: int
    slots: tuple = ("t1", "t2")

    @property
    def n(self) -> int:
        if self.n1 != self.n2:
            raise DimensionError(f"slots differ in size ({self.n1} vs {self.n2})")
        return self.n1

    @property
    def dims(self) -> list:
        return [2] * (self.n1 + self.n2)

    def expectation(self, s1, s2) -> float:
        """Recover the correlator Tr[R (s1 (x) s2)]."""
        op = np.kron(pauli_matrix(s1), pauli_matrix(s2))
        return float(np.trace(self.matrix @ op).real)


def two_time_expectation(rho, channel: Channel, s1, s2) -> float:
    """Coarse-grained two-time correlator Tr[s2 E({s1, rho} / 2)].

    Measuring the +-1 observable s1 and keeping only its sign leaves
    {s1, rho}/2 as the outcome-weighted post-measurement operator.
    """
    rho = np.asarray(rho, dtype=complex)
    m1, m2 = pauli_matrix(s1), pauli_matrix(s2)
    if m1.shape != rho.shape or rho.shape[0] != channel.dim_in or m2.shape[0] != channel.dim_out:
        raise DimensionError("observable, state and channel dimensions are inconsistent")
    evolved = apply_channel(channel, linalg.anticommutator(m1, rho) / 2)
    return float(np.trace(m2 @ evolved).real)


def _cause_effect_table(rho, channel, n1, n2):
    paulis2 = [pauli_matrix(s) for s in all_pauli_strings(n2)]
    table = ExpectationTable(n1, n2)
    for s1 in all_pauli_strings(n1):
        evolved = apply_channel(channel, linalg.anticommutator(pauli_matrix(s1), rho) / 2)
        for i2, m2 in enumerate(paulis2):
            # Tr[m2 @ evolved] without forming the product
            table.values[(s1.index, i2)] = float(np.einsum("ij,ji->", m2, evolved).real)
    return table


def _common_cause_table(joint, n1, n2):
    table = ExpectationTable(n1, n2)
    paulis2 = [pauli_matrix(s) for s in all_pauli_strings(n2)]
    for s1 in all_pauli_strings(n1):
        m1 = pauli_matrix(s1)
        for i2, m2 in enumerate(paulis2):
            table.values[(s1.index, i2)] = float(np.einsum("ij,ji->", np.kron(m1, m2), joint).real)
    return table


def generate_table(scenario: ScenarioConfig, shots: int | None = None, rng=None) -> ExpectationTable:
    """Full correlator table for ``scenario``.

    With ``shots`` set, every entry is replaced by the mean of that many
    simulated +-1 outcomes (binomial noise). The default is exact.
    """
    n = scenario.n
    if scenario.kind == "cause_effect":
        table = _cause_effect_table(scenario.rho, scenario.channel, n, n)
    elif scenario.kind == "common_cause":
        table = _common_cause_table(scenario.joint, n, n)
    else:
        ce = _cause_effect_table(scenario.rho, scenario.channel, n, n)
        cc = _common_cause_table(scenario.joint, n, n)
        table = ce.combine(cc, scenario.p)
    if shots is not None:
        table = sample_table(table, shots, rng)
    return table


def sample_table(table: ExpectationTable, shots: int, rng=None) -> ExpectationTable:
    if shots < 1:
        raise ValueError("shots must be positive")
    rng = np.random.default_rng() if rng is None else rng
    out = ExpectationTable(table.n1, table.n2)
    for key in sorted(table.values):
        v = table.values[key]
        if key == (0, 0):
            out.values[key] = 1.0
            continue
        plus = rng.binomial(shots, min(1.0, max(0.0, (1 + v) / 2)))
        out.values[key] = (2 * plus - shots) / shots
    return out


def build_pdm(table: ExpectationTable, atol=DEFAULT.exact) -> PDM:
    table.check(atol)
    n1, n2 = table.n1, table.n2
    p2 = [pauli_matrix(s) for s in all_pauli_strings(n2)]
    dim = 2 ** (n1 + n2)
    r = np.zeros((dim, dim), dtype=complex)
    for s1 in all_pauli_strings(n1):
        # sum over slot-2 operators first so each slot-1 Pauli is kron'd once
        block = sum(table.values[(s1.index, i2)] * m2 for i2, m2 in enumerate(p2))
        r += np.kron(pauli_matrix(s1), block)
    return PDM(r / dim, n1, n2)


def negativity(m) -> float:
    """Tr sqrt(m m^dagger) - Tr m: zero for positive semidefinite ``m``."""
    m = np.asarray(m.matrix if isinstance(m, PDM) else m, dtype=complex)
    return linalg.trace_norm(m) - float(np.trace(m).real)


def time_reverse(r: PDM) -> PDM:
    if r.n1 != r.n2:
        raise DimensionError(f"cannot reverse slots of unequal size ({r.n1} vs {r.n2})")
    s = linalg.swap_operator(2**r.n1)
    return PDM(s @ r.matrix @ s.conj().T, r.n2, r.n1, (r.slots[1], r.slots[0]))


def reduce_pdm(r: PDM, keep_t1, keep_t2) -> PDM:
    """Trace out the qubits of each slot that are not kept."""
    keep_t1, keep_t2 = sorted(set(keep_t1)), sorted(set(keep_t2))
    _check_subset(keep_t1, r.n1)
    _check_subset(keep_t2, r.n2)
    if not keep_t1 or not keep_t2:
        raise DimensionError("each slot must keep at least one qubit")
    keep = keep_t1 + [r.n1 + k for k in keep_t2]
    m = linalg.partial_trace(r.matrix, r.dims, keep)
    return PDM(m, len(keep_t1), len(keep_t2), r.slots)


def marginal_at_time(r: PDM, slot: int, atol=DEFAULT.exact) -> np.ndarray:
    """Reduced state of one time slot; must be a valid density matrix."""
    if slot not in (1, 2):
        raise ValueError(f"slot must be 1 or 2, got {slot}")
    keep = list(range(r.n1)) if slot == 1 else list(range(r.n1, r.n1 + r.n2))
    rho = linalg.partial_trace(r.matrix, r.dims, keep)
    lo = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]
    if lo < -atol:
        raise NonPositiveMarginalError(
            f"slot-{slot} marginal has negative eigenvalue {lo:.3g}; table is malformed or noisy"
        )
    return rho
