"""States, channels and the two experimental scenario families.

Density matrices are plain complex ndarrays checked with
:func:`check_density_matrix`. Channels are stored in Kraus form; a dilation
(unitary, ancilla, kept output subsystems) is converted once on construction.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError
from .tolerances import DEFAULT

PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def check_density_matrix(rho, atol=DEFAULT.rank) -> np.ndarray:
    """Return ``rho`` as a complex array, raising ``ValueError`` if it is not a state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    if not linalg.is_hermitian(rho, atol):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1) > atol:
        raise ValueError(f"density matrix trace is {tr}, expected 1")
    lo = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]
    if lo < -atol:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3g}")
    return rho


def num_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def lambda_plus_state(lam: float) -> np.ndarray:
    """(1 - lam) I/2 + lam |+><+|, a qubit polarized along +X by ``lam``."""
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    return (1 - lam) * np.eye(2, dtype=complex) / 2 + lam * linalg.projector(PLUS)


def basis_state(bits: str) -> np.ndarray:
    return linalg.projector(linalg.ket(bits))


def bell_state(which: str = "phi+") -> np.ndarray:
    vecs = {
        "phi+": linalg.ket("00") + linalg.ket("11"),
        "phi-": linalg.ket("00") - linalg.ket("11"),
        "psi+": linalg.ket("01") + linalg.ket("10"),
        "psi-": linalg.ket("01") - linalg.ket("10"),
    }
    return linalg.projector(vecs[which] / np.sqrt(2))


@dataclass(frozen=True)
class Channel:
    """A CPTP map in Kraus form from ``dim_in`` to ``dim_out`` dimensions."""

    kraus: tuple
    dim_in: int
    dim_out: int
    name: str = ""

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionError(
                    f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})"
                )
        completeness = sum(k.conj().T @ k for k in ops)
        err = np.max(np.abs(completeness - np.eye(self.dim_in)))
        if err > 1e-9:
            raise ValueError(f"Kraus operators are not trace preserving (error {err:.3g})")
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def from_kraus(cls, kraus, name=""):
        kraus = [np.asarray(k, dtype=complex) for k in kraus]
        dout, din = kraus[0].shape
        return cls(tuple(kraus), din, dout, name)

    @classmethod
    def from_dilation(cls, unitary, ancilla, dims, keep, name=""):
        """Channel rho -> Tr_{not keep}[U (rho (x) ancilla) U^dagger].

        ``dims`` are the subsystem dimensions of the joint input register
        ``rho (x) ancilla``; ``keep`` selects the output subsystems.
        """
        unitary = np.asarray(unitary, dtype=complex)
        ancilla = check_density_matrix(ancilla)
        dims = [int(d) for d in dims]
        total = int(np.prod(dims))
        if unitary.shape != (total, total):
            raise DimensionError(f"unitary shape {unitary.shape} does not match dims {dims}")
        if np.max(np.abs(unitary.conj().T @ unitary - np.eye(total))) > 1e-9:
            raise ValueError("dilation operator is not unitary")
        da = ancilla.shape[0]
        if total % da:
            raise DimensionError("ancilla dimension does not divide the register")
        din = total // da
        keep = sorted(set(keep))
        dout = int(np.prod([dims[k] for k in keep]))
        denv = total // dout
        discard = [i for i in range(len(dims)) if i not in keep]
        # move kept output factors to the front, then split rows into out (x) env
        u = unitary.reshape(dims + [total]).transpose(keep + discard + [len(dims)])
        u = u.reshape(total, total)
        w, v = np.linalg.eigh(ancilla)
        kraus = []
        for wa, va in zip(w, v.T):
            if wa <= 1e-14:
                continue
            # isometry V: din -> total, V|psi> = U(|psi> (x) |a>)
            iso = np.sqrt(wa) * (u @ np.kron(np.eye(din), va.reshape(-1, 1)))
            iso = iso.reshape(dout, denv, din)
            for e in range(denv):
                kraus.append(iso[:, e, :])
        kraus = [k for k in kraus if np.max(np.abs(k)) > 1e-15]
        return cls(tuple(kraus), din, dout, name)

    def __call__(self, rho):
        return apply_channel(self, rho)


def identity_channel(dim: int = 2) -> Channel:
    return Channel((np.eye(dim, dtype=complex),), dim, dim, "identity")


def unitary_channel(u, name="unitary") -> Channel:
    u = np.asarray(u, dtype=complex)
    return Channel((u,), u.shape[1], u.shape[0], name)


def partial_swap_unitary(theta: float) -> np.ndarray:
    """exp(-i theta SWAP) = cos(theta) I - i sin(theta) SWAP on two qubits."""
    return np.cos(theta) * np.eye(4, dtype=complex) - 1j * np.sin(theta) * linalg.swap_operator(2)


def partial_swap_channel(theta: float, ancilla=None) -> Channel:
    """Qubit channel obtained by partially swapping the input with ``ancilla``.

    The output is the second tensor slot after the interaction, so at
    theta = pi/2 the input arrives unchanged and at theta = 0 or pi the output
    is the ancilla regardless of input.
    """
    ancilla = basis_state("0") if ancilla is None else np.asarray(ancilla, dtype=complex)
    if ancilla.shape != (2, 2):
        raise DimensionError(f"partial swap ancilla must be one qubit, got {ancilla.shape}")
    return Channel.from_dilation(
        partial_swap_unitary(theta), ancilla, [2, 2], keep=[1], name=f"partial_swap({theta:.6g})"
    )


def measure_prepare_channel() -> Channel:
    """Measure in the computational basis and re-prepare the outcome."""
    k0 = linalg.projector(linalg.ket("0"))
    k1 = linalg.projector(linalg.ket("1"))
    return Channel((k0, k1), 2, 2, "measure_prepare")


def tensor_channels(*channels) -> Channel:
    """Independent parallel action of several channels."""
    kraus = [np.eye(1, dtype=complex)]
    for c in channels:
        kraus = [np.kron(a, b) for a in kraus for b in c.kraus]
    din = int(np.prod([c.dim_in for c in channels]))
    dout = int(np.prod([c.dim_out for c in channels]))
    return Channel(tuple(kraus), din, dout, " x ".join(c.name for c in channels))


def permute_output(c: Channel, dims, order) -> Channel:
    """Reorder the output tensor factors of ``c`` (see ``linalg.permute_subsystems``)."""
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != c.dim_out:
        raise DimensionError(f"output dims {dims} do not match channel output {c.dim_out}")
    nsys = len(dims)
    kraus = []
    for k in c.kraus:
        t = k.reshape(dims + [c.dim_in]).transpose(list(order) + [nsys])
        kraus.append(t.reshape(c.dim_out, c.dim_in))
    return Channel(tuple(kraus), c.dim_in, c.dim_out, c.name)


def apply_channel(c: Channel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (c.dim_in, c.dim_in):
        raise DimensionError(f"state shape {rho.shape} does not match channel input {c.dim_in}")
    return sum(k @ rho @ k.conj().T for k in c.kraus)


def choi_of_channel(c: Channel) -> np.ndarray:
    """C = sum_ij |i><j| (x) E(|i><j|), trace equal to the input dimension."""
    d = c.dim_in
    out = np.zeros((d * c.dim_out, d * c.dim_out), dtype=complex)
    for i in range(d):
        for j in range(d):
            eij = np.zeros((d, d), dtype=complex)
            eij[i, j] = 1
            out += np.kron(eij, apply_channel(c, eij))
    return out


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(dim: int, rng, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_channel(dim: int, rng, env_dim: int = 2) -> Channel:
    """Random CPTP map obtained from a random dilation unitary and mixed environment."""
    u = random_unitary(dim * env_dim, rng)
    env = random_density_matrix(env_dim, rng)
    return Channel.from_dilation(u, env, [dim, env_dim], keep=[0], name="random")


@dataclass
class ScenarioConfig:
    """One data-generating process over two time slots.

    ``cause_effect`` measures ``rho`` at t1, evolves it with ``channel`` and
    measures again at t2. ``common_cause`` measures both slots at once on
    ``joint``. ``mixture`` combines the two tables with weight ``p`` on the
    cause-effect part.
    """

    kind: str
    rho: np.ndarray | None = None
    channel: Channel | None = None
    joint: np.ndarray | None = None
    p: float = 1.0
    n: int = field(init=False)

    def __post_init__(self):
        if self.kind not in ("cause_effect", "common_cause", "mixture"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"mixing weight must lie in [0, 1], got {self.p}")
        n = None
        if self.kind in ("cause_effect", "mixture"):
            if self.rho is None or self.channel is None:
                raise ValueError(f"{self.kind} scenario needs rho and channel")
            self.rho = check_density_matrix(self.rho)
            if self.channel.dim_in != self.rho.shape[0]:
                raise DimensionError("channel input does not match the initial state")
            if self.channel.dim_out != self.channel.dim_in:
                raise DimensionError("both time slots must hold the same number of qubits")
            n = num_qubits(self.rho.shape[0])
        if self.kind in ("common_cause", "mixture"):
            if self.joint is None:
                raise ValueError(f"{self.kind} scenario needs a joint state")
            self.joint = check_density_matrix(self.joint)
            nj = num_qubits(self.joint.shape[0])
            if nj % 2:
                raise DimensionError("joint state must split into two equal slots")
            if n is not None and nj // 2 != n:
                raise DimensionError("joint state and cause-effect slots differ in size")
            n = nj // 2
        self.n = n


def decohering_scenario(lam: float) -> ScenarioConfig:
    return ScenarioConfig("cause_effect", rho=lambda_plus_state(lam), channel=measure_prepare_channel())


def partial_swap_scenario(lam: float, theta: float, ancilla=None) -> ScenarioConfig:
    return ScenarioConfig(
        "cause_effect", rho=lambda_plus_state(lam), channel=partial_swap_channel(theta, ancilla)
    )
