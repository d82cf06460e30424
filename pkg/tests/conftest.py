import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def rand_hermitian(dim, rng):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def brute_negativity(m):
    """Oracle: sum |eigenvalues| - sum eigenvalues for a Hermitian matrix."""
    ev = np.linalg.eigvalsh(m)
    return float(np.sum(np.abs(ev)) - np.sum(ev))


def brute_two_time(rho, kraus, s1, s2):
    """Oracle: enumerate the +-1 outcomes of projective s1 then s2 measurements."""
    d1, d2 = s1.shape[0], s2.shape[0]
    total = 0.0
    for a in (1, -1):
        pa = (np.eye(d1) + a * s1) / 2
        post = pa @ rho @ pa
        evolved = sum(k @ post @ k.conj().T for k in kraus)
        for b in (1, -1):
            pb = (np.eye(d2) + b * s2) / 2
            total += a * b * np.trace(pb @ evolved).real
    return total


def brute_pdm(table_fn, n1, n2):
    """Oracle: assemble sum <s1,s2> s1 (x) s2 / 2^(n1+n2) by explicit label loops."""
    from itertools import product
    from functools import reduce

    paulis = {"I": I2, "X": X, "Y": Y, "Z": Z}
    dim = 2 ** (n1 + n2)
    r = np.zeros((dim, dim), dtype=complex)
    for l1 in product("IXYZ", repeat=n1):
        for l2 in product("IXYZ", repeat=n2):
            op = reduce(np.kron, [paulis[c] for c in l1 + l2])
            r += table_fn("".join(l1), "".join(l2)) * op
    return r / dim


def brute_choi_from_pdm(r, d1, d2):
    """Oracle: solve (P X + X P)/2 = R as a dense linear system, P = rho (x) I."""
    rho = np.trace(r.reshape(d1, d2, d1, d2), axis1=1, axis2=3)
    p = np.kron(rho, np.eye(d2))
    dim = d1 * d2
    eye = np.eye(dim)
    # row-major vec: vec(P X) = (P (x) I) vec X, vec(X P) = (I (x) P^T) vec X
    op = (np.kron(p, eye) + np.kron(eye, p.T)) / 2
    x = np.linalg.solve(op, r.reshape(-1)).reshape(dim, dim)
    return x.reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3).reshape(dim, dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(RESULTS):
        status = RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if status == 'PASS' else 'FAIL'}  {name}"
                                    + ("" if status == "PASS" else f"  ({status[6:]})"))
