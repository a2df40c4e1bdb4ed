"""Dense linear algebra for small qubit registers.

States are 1-D complex arrays, operators and density matrices are 2-D
complex arrays. Qubit ordering is big-endian: the leftmost label of a ket
is the most significant bit of the amplitude index, so for ``|xABC>`` the
qubit ``x`` is index 0.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 10

HERMITIAN_ATOL = 1e-10
PSD_ATOL = 1e-10


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


I2 = _frozen(np.eye(2))
X = _frozen([[0, 1], [1, 0]])
Y = _frozen([[0, -1j], [1j, 0]])
Z = _frozen([[1, 0], [0, -1]])

PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def ket(bits: str) -> np.ndarray:
    """Computational basis state from a bit string, e.g. ``ket("010")``."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"invalid bit string {bits!r}")
    if len(bits) > MAX_QUBITS:
        raise ValueError(f"{len(bits)} qubits exceeds the {MAX_QUBITS}-qubit limit")
    out = np.zeros(1 << len(bits), dtype=complex)
    out[int(bits, 2)] = 1.0
    return out


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of states or operators, left factor most significant."""
    if not factors:
        raise ValueError("tensor needs at least one factor")
    arrays = [np.asarray(f, dtype=complex) for f in factors]
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor operands must be finite")
    ndims = {a.ndim for a in arrays}
    if len(ndims) != 1 or ndims.pop() not in (1, 2):
        raise ValueError("tensor operands must all be states or all be operators")
    dim = int(np.prod([a.shape[0] for a in arrays]))
    if dim > 1 << MAX_QUBITS:
        raise ValueError(f"tensor product dimension {dim} exceeds 2^{MAX_QUBITS}")
    return reduce(np.kron, arrays)


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, atol=atol, rtol=0)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order.

    Raises
    ------
    ValueError
        If ``m`` is not square or deviates from Hermitian by more than 1e-10.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within 1e-10")
    # symmetrize so LAPACK sees exactly the Hermitian part
    h = 0.5 * (m + m.conj().T)
    return np.linalg.eigvalsh(h)[::-1]


def validate_density(rho: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    num_qubits(rho.shape[0])
    if not is_hermitian(rho, atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3g} != 1")
    if hermitian_eigenvalues(rho)[-1] < -PSD_ATOL:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep``.

    The kept qubits stay in ascending index order. ``rho`` may also be a
    state vector, in which case the reduction of ``|psi><psi|`` is returned.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = density(rho)
    n = num_qubits(rho.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"qubit indices {keep} out of range for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # move kept axes first on both sides, then contract the traced block
    t = np.transpose(t, keep + traced + [n + q for q in keep] + [n + q for q in traced])
    dk, dt = 1 << len(keep), 1 << len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_transpose(rho: np.ndarray, subsystem: int) -> np.ndarray:
    """Partial transpose of a two-qubit density matrix on qubit 0 or 1."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("partial_transpose expects a two-qubit (4x4) matrix")
    if subsystem not in (0, 1):
        raise ValueError("subsystem must be 0 or 1")
    t = rho.reshape(2, 2, 2, 2)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)


def projector(psi: np.ndarray) -> np.ndarray:
    return density(normalize(psi))


def apply_1q(op: np.ndarray, psi: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a single-qubit operator to ``qubit`` of an n-qubit state."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi.shape[0])
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    t = psi.reshape([2] * n)
    t = np.tensordot(op, t, axes=([1], [qubit]))
    return np.moveaxis(t, 0, qubit).reshape(-1)


def local_operator(ops: Sequence[np.ndarray]) -> np.ndarray:
    return tensor(*ops)


def pauli_string(label: str) -> np.ndarray:
    """Operator for a Pauli word such as ``"XXZ"``."""
    try:
        return tensor(*(PAULI[c] for c in label.upper()))
    except KeyError:
        raise ValueError(f"invalid Pauli word {label!r}") from None


def expectation(op: np.ndarray, psi: np.ndarray) -> float:
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(np.vdot(psi, op @ psi)))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Squared overlap ``|<a|b>|^2`` of two normalized pure states."""
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    overlap = np.vdot(a, b)
    if abs(overlap) == 0:
        return bool(np.allclose(a, b, atol=atol, rtol=0))
    phase = overlap / abs(overlap)
    return bool(np.allclose(a * phase, b, atol=atol, rtol=0))


def gram_schmidt(vectors: Sequence[np.ndarray], atol: float = 1e-12) -> list[np.ndarray | None]:
    """Orthonormalize in order; linearly dependent inputs map to ``None``."""
    basis: list[np.ndarray] = []
    out: list[np.ndarray | None] = []
    for v in vectors:
        w = np.array(v, dtype=complex)
        # two passes keep orthogonality at machine precision
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        norm = np.linalg.norm(w)
        if norm <= atol:
            out.append(None)
            continue
        w = w / norm
        basis.append(w)
        out.append(w)
    return out


def orthonormal_completion(vectors: Sequence[np.ndarray], dim: int, atol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormal basis of the complement of ``span(vectors)``.

    Candidates are computational basis states tried in index order, so the
    result is deterministic.
    """
    span = [v for v in gram_schmidt(vectors) if v is not None]
    completion: list[np.ndarray] = []
    for i in range(dim):
        if len(span) + len(completion) == dim:
            break
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        w = e
        for _ in range(2):
            for b in span + completion:
                w = w - np.vdot(b, w) * b
        norm = np.linalg.norm(w)
        if norm > atol:
            completion.append(w / norm)
    return completion


def random_unitary_2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary via QR of a complex Ginibre matrix."""
    g = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))
