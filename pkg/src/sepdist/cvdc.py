"""The CVDC entanglement-distribution protocol on qubits a, b, c.

Alice holds a and c, Bob holds b.  Starting from sigma, Alice undoes
CNOT_ac, ships c to Bob, Bob applies CNOT_bc and then either measures c
(probabilistic variant) or applies the local channel E_bc and discards c
(deterministic variant).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import qlinalg as ql
from .dur_states import DurParams, build_sigma
from .errors import ContractError, PreconditionError

A, B, C = 0, 1, 2
DEGENERATE_PROB = 1e-14


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(o, dtype=complex) for o in self.operators)
        if not ops:
            raise ContractError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(o.shape != shape for o in ops) or shape[0] != shape[1]:
            raise ContractError("Kraus operators must be square and share one shape")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def completeness(self) -> np.ndarray:
        """sum_j O_j^dagger O_j; equal to the identity for a trace-preserving map."""
        return sum(ql.dagger(o) @ o for o in self.operators)

    def is_trace_preserving(self, tol: float = ql.STRUCT_TOL) -> bool:
        return ql.allclose(self.completeness(), np.eye(self.dim), tol)


@dataclass(frozen=True)
class MeasurementResult:
    outcome: int
    probability: float
    weighted_state: np.ndarray
    post_state: np.ndarray | None  # None when the branch is degenerate

    @property
    def degenerate(self) -> bool:
        return self.post_state is None


@dataclass(frozen=True)
class ProcedureTrace:
    stages: tuple[tuple[str, np.ndarray], ...]
    p_e: float
    branches: tuple[MeasurementResult, MeasurementResult] | None = None
    final_state: np.ndarray | None = None

    def stage(self, label: str) -> np.ndarray:
        for name, m in self.stages:
            if name == label:
                return m
        raise KeyError(label)


def cnot(control: int, target: int, n: int) -> np.ndarray:
    """Permutation matrix of CNOT with qubit 0 as the most significant bit."""
    if control == target or not (0 <= control < n and 0 <= target < n):
        raise PreconditionError(f"invalid CNOT qubits control={control}, target={target} for n={n}")
    dim = 1 << n
    cbit = 1 << (n - 1 - control)
    tbit = 1 << (n - 1 - target)
    u = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ tbit if i & cbit else i
        u[j, i] = 1.0
    return u


CNOT_AC = cnot(A, C, 3)
CNOT_BC = cnot(B, C, 3)


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if u.shape != rho.shape:
        raise PreconditionError(f"unitary shape {u.shape} does not match state shape {rho.shape}")
    if not ql.is_unitary(u):
        raise ContractError("matrix is not unitary within 1e-10")
    return u @ rho @ ql.dagger(u)


def measure_qubit(rho: np.ndarray, q: int) -> tuple[MeasurementResult, MeasurementResult]:
    """Both branches of a computational-basis measurement of qubit ``q``.

    The weighted state of outcome i is tr_q[(|i><i|_q) rho]; its trace is
    the outcome probability.  Branches with probability below 1e-14 carry
    no normalized post-state.
    """
    rho = np.asarray(rho, dtype=complex)
    n = ql.num_qubits(rho)
    if not 0 <= q < n:
        raise PreconditionError(f"qubit {q} out of range for {n} qubits")
    out = []
    for outcome in (0, 1):
        proj = _outcome_projector(q, n, outcome)
        projected = proj @ rho @ proj
        weighted = ql.partial_trace(projected, [q]) if n > 1 else projected
        prob = float(np.trace(weighted).real)
        post = weighted / prob if prob > DEGENERATE_PROB else None
        out.append(MeasurementResult(outcome, prob, weighted, post))
    return out[0], out[1]


@lru_cache(maxsize=None)
def _outcome_projector(q: int, n: int, outcome: int) -> np.ndarray:
    proj = ql.embed_operator(np.diag([1.0 - outcome, float(outcome)]), [q], n)
    proj.setflags(write=False)
    return proj


def ebc_channel() -> KrausChannel:
    """Bob's local map on (b, c): keep the c=0 sector, reset b to |0> on c=1."""
    k00 = np.array([[1, 0], [0, 0]], dtype=complex)
    k01 = np.array([[0, 1], [0, 0]], dtype=complex)
    k11 = np.array([[0, 0], [0, 1]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    return KrausChannel(
        (
            ql.kron(eye, k00),
            ql.kron(k00, k11),
            ql.kron(k01, k11),
        )
    )


def apply_channel(rho: np.ndarray, ch: KrausChannel, on: Sequence[int] | Iterable[int]) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    n = ql.num_qubits(rho)
    on = list(on)
    if ch.dim != 1 << len(on):
        raise PreconditionError(f"channel of dimension {ch.dim} cannot act on qubits {on}")
    out = np.zeros_like(rho)
    for op in ch.operators:
        k = ql.embed_operator(op, on, n)
        out += k @ rho @ ql.dagger(k)
    return out


def run_probabilistic(p: DurParams) -> ProcedureTrace:
    """Steps (i)-(iv): sigma -> CNOT_ac -> rho -> CNOT_bc -> tau -> measure c."""
    sigma = build_sigma(p)
    rho = apply_unitary(sigma, CNOT_AC)
    tau = apply_unitary(rho, CNOT_BC)
    b0, b1 = measure_qubit(tau, C)
    return ProcedureTrace(
        stages=(("sigma", sigma), ("after_cnot_ac", rho), ("after_cnot_bc", tau)),
        p_e=b0.probability,
        branches=(b0, b1),
        final_state=b0.post_state,
    )


def run_deterministic(p: DurParams) -> np.ndarray:
    """Steps (i)-(iii) followed by E_bc and discarding c; returns the ab state."""
    return trace_deterministic(p).final_state


def trace_deterministic(p: DurParams) -> ProcedureTrace:
    sigma = build_sigma(p)
    rho = apply_unitary(sigma, CNOT_AC)
    tau = apply_unitary(rho, CNOT_BC)
    after = apply_channel(tau, ebc_channel(), [B, C])
    final = ql.partial_trace(after, [C])
    b0 = measure_qubit(tau, C)[0]
    return ProcedureTrace(
        stages=(("sigma", sigma), ("after_cnot_ac", rho), ("after_cnot_bc", tau), ("after_ebc", after)),
        p_e=b0.probability,
        final_state=final,
    )
