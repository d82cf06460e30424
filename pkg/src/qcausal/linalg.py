"""Dense complex linear algebra on small qubit registers.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Qubit 0
is always the most-significant tensor factor.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionError, NotHermitianError
from .tolerances import DEFAULT

PAULI_LABELS = "IXYZ"

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli basis operator such as ``"XZ"``.

    The integer index is the base-4 number with digits I=0, X=1, Y=2, Z=3 and
    the first label as the most-significant digit.
    """

    labels: str

    def __post_init__(self):
        if not self.labels or any(c not in PAULI_LABELS for c in self.labels):
            raise ValueError(f"invalid Pauli labels {self.labels!r}")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def index(self) -> int:
        idx = 0
        for c in self.labels:
            idx = 4 * idx + PAULI_LABELS.index(c)
        return idx

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliString":
        if n < 1 or not 0 <= index < 4**n:
            raise ValueError(f"index {index} out of range for {n} qubits")
        digits = []
        for _ in range(n):
            index, d = divmod(index, 4)
            digits.append(PAULI_LABELS[d])
        return cls("".join(reversed(digits)))

    def is_identity(self) -> bool:
        return set(self.labels) == {"I"}

    def __str__(self):
        return self.labels


def all_pauli_strings(n: int) -> list[PauliString]:
    return [PauliString.from_index(n, i) for i in range(4**n)]


def tensor(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not mats:
        raise ValueError("tensor needs at least one operand")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def pauli_matrix(p) -> np.ndarray:
    if not isinstance(p, PauliString):
        p = PauliString(p)
    return tensor(*(_PAULI[c] for c in p.labels))


def anticommutator(a, b) -> np.ndarray:
    a = _square(a)
    b = _square(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b + b @ a


def partial_trace(m, dims, keep) -> np.ndarray:
    """Trace out every subsystem of ``m`` whose position is not in ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order. Kept subsystems
    retain their original relative order.
    """
    m = _square(m)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionError(f"subsystem dims {dims} do not multiply to {m.shape[0]}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    nsys = len(dims)
    t = m.reshape(dims + dims)
    # trace from the highest index down so earlier axis numbers stay valid
    for i in reversed(range(nsys)):
        if i not in keep:
            cur = t.ndim // 2
            t = np.trace(t, axis1=i, axis2=i + cur)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d, d)


def partial_transpose(m, dims, sys) -> np.ndarray:
    """Transpose the subsystems listed in ``sys``."""
    m = _square(m)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionError(f"subsystem dims {dims} do not multiply to {m.shape[0]}")
    nsys = len(dims)
    perm = list(range(2 * nsys))
    for s in set(sys):
        perm[s], perm[s + nsys] = perm[s + nsys], perm[s]
    return m.reshape(dims + dims).transpose(perm).reshape(m.shape)


def permute_subsystems(m, dims, order) -> np.ndarray:
    """Reorder tensor factors so that new position k holds old subsystem ``order[k]``."""
    m = _square(m)
    dims = [int(d) for d in dims]
    nsys = len(dims)
    if sorted(order) != list(range(nsys)):
        raise DimensionError(f"{order} is not a permutation of {nsys} subsystems")
    t = m.reshape(dims + dims).transpose(list(order) + [o + nsys for o in order])
    return t.reshape(m.shape)


def hermiticity_residual(m) -> float:
    m = _square(m)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m, atol=DEFAULT.hermitian) -> bool:
    return hermiticity_residual(m) <= atol


def hermitian_eigen(m, atol=DEFAULT.hermitian):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(evals, evecs)`` with eigenvalues in descending order and the
    matching orthonormal eigenvectors as columns.
    """
    m = _square(m)
    res = hermiticity_residual(m)
    if res > atol:
        raise NotHermitianError(f"matrix is not Hermitian (residual {res:.3g} > {atol:.3g})")
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    return evals[::-1], evecs[:, ::-1]


def trace_norm(m) -> float:
    """Sum of singular values, i.e. Tr sqrt(m m^dagger)."""
    m = _square(m)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def swap_operator(d1: int, d2: int | None = None) -> np.ndarray:
    """Unitary mapping |a>|b> to |b>|a> for factors of dimension ``d1`` and ``d2``."""
    d2 = d1 if d2 is None else d2
    s = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for a in range(d1):
        for b in range(d2):
            s[b * d1 + a, a * d2 + b] = 1
    return s


def ket(bits: str) -> np.ndarray:
    """Computational basis column vector for a bit string like ``"01"``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())
