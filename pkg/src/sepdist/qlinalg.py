"""Dense complex linear algebra on small multi-qubit operators.

Qubit 0 is the most significant bit of a basis index, so for three qubits
``index = 4*a + 2*b + c``.  All functions are pure and operate on
``numpy.ndarray`` values; nothing here holds state.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .errors import ContractError, PreconditionError

STRUCT_TOL = 1e-12
SPECTRAL_TOL = 1e-10
HERMITIAN_TOL = 1e-10


def num_qubits(m: np.ndarray) -> int:
    """Number of qubits a square ``2**n`` matrix acts on."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        raise PreconditionError(f"dimension {dim} is not a power of two")
    return n


def _qubit_set(qubits: Iterable[int], n: int) -> list[int]:
    qs = sorted(set(int(q) for q in qubits))
    if any(q < 0 or q >= n for q in qs):
        raise PreconditionError(f"qubit indices {qs} out of range for {n} qubits")
    return qs


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; entry ``(i*db + k, j*db + l)`` is ``a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    (ra, ca), (rb, cb) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)


def kron_all(*ms: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = kron(out, m)
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def allclose(a: np.ndarray, b: np.ndarray, atol: float) -> bool:
    """Entrywise comparison with an explicit absolute tolerance."""
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0) <= atol)


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and max_abs_diff(m, dagger(m)) <= tol


def _require_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ContractError("matrix is not Hermitian within tolerance")
    return m


def partial_trace(rho: np.ndarray, discard: Iterable[int]) -> np.ndarray:
    """Trace out the qubits in ``discard``; the kept qubits retain their order."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    gone = _qubit_set(discard, n)
    if not gone or len(gone) >= n:
        raise PreconditionError("discard must be a nonempty proper subset of the qubits")
    kept = [q for q in range(n) if q not in gone]
    t = rho.reshape((2,) * (2 * n))
    perm = kept + gone + [n + q for q in kept] + [n + q for q in gone]
    dk, dg = 1 << len(kept), 1 << len(gone)
    t = t.transpose(perm).reshape(dk, dg, dk, dg)
    return np.einsum("ijkj->ik", t)


def partial_transpose(rho: np.ndarray, subsystem: Iterable[int]) -> np.ndarray:
    """Transpose the row/column indices belonging to the qubits in ``subsystem``."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    qs = _qubit_set(subsystem, n)
    perm = list(range(2 * n))
    for q in qs:
        perm[q], perm[n + q] = perm[n + q], perm[q]
    dim = 1 << n
    return rho.reshape((2,) * (2 * n)).transpose(perm).reshape(dim, dim)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    Raises ContractError if ``m`` is not Hermitian within 1e-10.  The input
    is symmetrised before the LAPACK call so round-off in the off-diagonal
    does not leak into the spectrum.
    """
    m = _require_hermitian(m)
    return np.linalg.eigvalsh(0.5 * (m + dagger(m)))


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def min_eigenvalue(m: np.ndarray) -> float:
    return float(hermitian_eigenvalues(m)[0])


def is_psd(m: np.ndarray, tol: float = SPECTRAL_TOL) -> bool:
    return min_eigenvalue(m) >= -tol


def is_unitary(u: np.ndarray, tol: float = SPECTRAL_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return allclose(dagger(u) @ u, np.eye(u.shape[0]), tol)


def check_density(rho: np.ndarray, *, trace: float | None = 1.0) -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    ``trace=None`` accepts an unnormalized (weighted) state, which is how
    measurement branches are carried around.
    """
    rho = np.asarray(rho, dtype=complex)
    num_qubits(rho)
    if not is_hermitian(rho, STRUCT_TOL):
        raise ContractError("density matrix is not Hermitian within 1e-12")
    if trace is not None and abs(np.trace(rho).real - trace) > STRUCT_TOL:
        raise ContractError(f"density matrix trace {np.trace(rho).real!r} != {trace}")
    if not is_psd(rho, SPECTRAL_TOL):
        raise ContractError("density matrix has a negative eigenvalue below -1e-10")
    return rho


def embed_operator(op: np.ndarray, targets: Iterable[int], n: int) -> np.ndarray:
    """Lift ``op`` acting on ``targets`` (in the given order) to the full n-qubit space."""
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise PreconditionError("target qubits must be distinct")
    _qubit_set(targets, n)
    op = np.asarray(op, dtype=complex)
    k = len(targets)
    if op.shape != (1 << k, 1 << k):
        raise PreconditionError(f"operator of shape {op.shape} does not act on {k} qubits")
    rest = [q for q in range(n) if q not in targets]
    full = kron(op, np.eye(1 << len(rest)))
    # axes of `full` are ordered (targets, rest); move them back to 0..n-1
    order = targets + rest
    inv = [order.index(q) for q in range(n)]
    perm = inv + [n + i for i in inv]
    dim = 1 << n
    return full.reshape((2,) * (2 * n)).transpose(perm).reshape(dim, dim)


def basis_ket(index: int, n: int) -> np.ndarray:
    """Computational basis column vector ``|index>`` on n qubits."""
    if not 0 <= index < (1 << n):
        raise PreconditionError(f"basis index {index} out of range for {n} qubits")
    v = np.zeros((1 << n, 1), dtype=complex)
    v[index, 0] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1, 1)
    return v @ dagger(v)
