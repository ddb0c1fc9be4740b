"""The Dür four-parameter family of three-qubit GHZ-diagonal states.

A point of the family is a :class:`DurParams` record
``(lam0p, lam0m, lam1, lam2, lam3)`` with
``lam0p + lam0m + 2*(lam1 + lam2 + lam3) == 1`` and ``lam0p`` the largest
weight.  The state is

    rho = sum_s lam0s |Psi0s><Psi0s| + sum_j lam_j (|Psi+_j><Psi+_j| + |Psi-_j><Psi-_j|)

with ``|Psi+-_j> = (|j>_ab |0>_c +- |3-j>_ab |1>_c) / sqrt(2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import qlinalg as ql
from .errors import PreconditionError, ValidationError

TRACE_TOL = 1e-12
ORDER_TOL = 1e-12
RENORM_FLOOR = 1e-15

FIELDS = ("lam0p", "lam0m", "lam1", "lam2", "lam3")

P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class DurParams:
    """Weights of the Dür family, in the order (λ0+, λ0-, λ1, λ2, λ3).

    Construction validates the invariants.  A trace-constraint residual up
    to ``TRACE_TOL`` is absorbed into ``lam0m`` (or ``lam0p`` if ``lam0m``
    would go negative); anything larger raises ValidationError.
    """

    lam0p: float
    lam0m: float
    lam1: float
    lam2: float
    lam3: float

    def __post_init__(self):
        vals = [float(getattr(self, f)) for f in FIELDS]
        for f, v in zip(FIELDS, vals):
            if not math.isfinite(v):
                raise ValidationError(f"{f} must be finite, got {v!r}")
        total = vals[0] + vals[1] + 2.0 * (vals[2] + vals[3] + vals[4])
        resid = 1.0 - total
        if abs(resid) > TRACE_TOL:
            raise ValidationError(
                f"trace constraint lam0p + lam0m + 2*(lam1+lam2+lam3) = 1 violated: sum is {total!r}"
            )
        # leave round-off alone so that re-validating a record is idempotent
        if abs(resid) > RENORM_FLOOR:
            if vals[1] + resid >= 0.0:
                vals[1] += resid
            else:
                vals[0] += resid
        for f, v in zip(FIELDS, vals):
            if v < 0.0 or v > 1.0:
                raise ValidationError(f"{f} = {v!r} outside [0, 1]")
        for f, v in zip(FIELDS[1:], vals[1:]):
            if v > vals[0] + ORDER_TOL:
                raise ValidationError(f"lam0p must dominate the other weights: lam0p = {vals[0]!r} < {f} = {v!r}")
        for f, v in zip(FIELDS, vals):
            object.__setattr__(self, f, v)

    @property
    def Delta(self) -> float:
        """λ0+ - λ0-: the GHZ coherence that the protocol turns into entanglement."""
        return self.lam0p - self.lam0m

    @property
    def delta(self) -> float:
        """λ0+ + λ0-."""
        return self.lam0p + self.lam0m

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.lam0p, self.lam0m, self.lam1, self.lam2, self.lam3)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: dict, tol: float = TRACE_TOL) -> "DurParams":
        missing = [f for f in FIELDS if f not in record]
        extra = sorted(set(record) - set(FIELDS))
        if missing or extra:
            raise ValidationError(f"params record needs exactly {FIELDS}; missing {missing}, unexpected {extra}")
        return cls.from_values([record[f] for f in FIELDS], tol=tol)

    @classmethod
    def from_values(cls, values: Sequence[float], tol: float = TRACE_TOL) -> "DurParams":
        """Build from five numbers, accepting a trace residual up to ``tol``.

        Residuals above ``TRACE_TOL`` but within ``tol`` are removed by
        rescaling all five weights, which keeps every ordering constraint
        intact (useful for hand-typed decimals such as 0.3333333333).
        """
        if len(values) != 5:
            raise ValidationError(f"expected 5 weights (lam0p, lam0m, lam1, lam2, lam3), got {len(values)}")
        try:
            vals = [float(v) for v in values]
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"weights must be numbers: {exc}") from None
        total = vals[0] + vals[1] + 2.0 * sum(vals[2:])
        if TRACE_TOL < abs(total - 1.0) <= tol and total > 0:
            vals = [v / total for v in vals]
        return cls(*vals)


RHO_PRIME = DurParams(1 / 3, 0.0, 1 / 6, 0.0, 1 / 6)
"""Weights of the separable state used in the original CVDC protocol."""


def psi_ket(j: int, sign: int | str) -> np.ndarray:
    """Column vector (|j>_ab|0>_c + s|3-j>_ab|1>_c)/sqrt(2)."""
    if not isinstance(j, (int, np.integer)) or not 0 <= j <= 3:
        raise PreconditionError(f"j must be an integer in 0..3, got {j!r}")
    s = _sign(sign)
    v = np.zeros((8, 1), dtype=complex)
    v[2 * j + 0, 0] = 1.0
    v[2 * (3 - j) + 1, 0] += s
    return v / math.sqrt(2.0)


def _sign(sign: int | str) -> int:
    if sign in ("+", 1, +1):
        return 1
    if sign in ("-", -1):
        return -1
    raise PreconditionError(f"sign must be '+' or '-', got {sign!r}")


def psi(j: int, sign: int | str) -> np.ndarray:
    """Projector onto ``psi_ket(j, sign)``."""
    return ql.projector(psi_ket(j, sign))


def build_rho(p: DurParams) -> np.ndarray:
    rho = p.lam0p * psi(0, "+") + p.lam0m * psi(0, "-")
    for j, lam in ((1, p.lam1), (2, p.lam2), (3, p.lam3)):
        rho = rho + lam * (psi(j, "+") + psi(j, "-"))
    return rho


def sigma_blocks(p: DurParams) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized ab blocks of sigma on the c=0 and c=1 sectors."""
    D, d = p.Delta, p.delta
    s0 = np.array(
        [
            [d / 2, 0, 0, D / 2],
            [0, p.lam1, 0, 0],
            [0, 0, p.lam1, 0],
            [D / 2, 0, 0, d / 2],
        ],
        dtype=complex,
    )
    s1 = np.diag([p.lam3, p.lam2, p.lam2, p.lam3]).astype(complex)
    return s0, s1


def tau_blocks(p: DurParams) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized ab blocks of tau on the c=0 and c=1 sectors."""
    D, d = p.Delta, p.delta
    t0 = np.array(
        [
            [d / 2, 0, 0, D / 2],
            [0, p.lam2, 0, 0],
            [0, 0, p.lam2, 0],
            [D / 2, 0, 0, d / 2],
        ],
        dtype=complex,
    )
    t1 = np.diag([p.lam3, p.lam1, p.lam1, p.lam3]).astype(complex)
    return t0, t1


def assemble_c_blocks(block0: np.ndarray, block1: np.ndarray) -> np.ndarray:
    """block0 (x) |0><0|_c + block1 (x) |1><1|_c."""
    return ql.kron(block0, P0) + ql.kron(block1, P1)


def build_sigma(p: DurParams) -> np.ndarray:
    """The state Alice and Bob start from, assembled from its c-sector blocks."""
    return assemble_c_blocks(*sigma_blocks(p))


def build_tau(p: DurParams) -> np.ndarray:
    return assemble_c_blocks(*tau_blocks(p))


def sigma_delta_params(delta: float) -> DurParams:
    """One-parameter extremal state: λ0+=(1-Δ)/2, λ0-=λ0+-Δ, λ1=λ3=Δ/2, λ2=0."""
    delta = float(delta)
    if not 0.0 < delta <= 1.0 / 3.0:
        raise PreconditionError(f"Delta must lie in (0, 1/3], got {delta!r}")
    lam0p = (1.0 - delta) / 2.0
    lam0m = max(lam0p - delta, 0.0)
    return DurParams(lam0p, lam0m, delta / 2.0, 0.0, delta / 2.0)


build_sigma_delta = sigma_delta_params


def _dirichlet_batch(rng: np.random.Generator, size: int) -> np.ndarray:
    e = rng.exponential(1.0, size=(size, 5))
    x = e / e.sum(axis=1, keepdims=True)
    x[:, 2:] *= 0.5
    keep = np.all(x[:, :1] >= x[:, 1:], axis=1)
    return x[keep]


def sample_params(seed: int, count: int) -> list[DurParams]:
    """Seeded draws from the constrained simplex.

    Five unit exponentials are normalised, the λ1..λ3 coordinates halved so
    the trace constraint holds, and draws where λ0+ is not the maximum are
    rejected.
    """
    if count < 1:
        raise PreconditionError("count must be >= 1")
    rng = np.random.default_rng(seed)
    rows: list[np.ndarray] = []
    have = 0
    while have < count:
        batch = _dirichlet_batch(rng, max(2 * (count - have), 64) * 2)
        rows.append(batch)
        have += len(batch)
    x = np.concatenate(rows)[:count]
    return [DurParams(*map(float, r)) for r in x]


def sample_slice(delta: float, count: int, rng: np.random.Generator) -> list[DurParams]:
    """Draw ``count`` points of class S with λ0+ - λ0- fixed to ``delta``.

    λ2 is uniform on [0, min(Δ/2, (1-3Δ)/2)), then (λ1, λ3) = Δ/2 + u with u
    uniform on the triangle u1 + u3 <= (1-3Δ)/2 - λ2 that the trace
    constraint leaves; draws where λ0+ fails to dominate are rejected.  At
    Δ = 1/3 the slice is a single point and every draw returns it.
    """
    delta = float(delta)
    if not 0.0 < delta <= 1.0 / 3.0:
        raise PreconditionError(f"Delta must lie in (0, 1/3], got {delta!r}")
    if count < 0:
        raise PreconditionError("count must be >= 0")
    room = max((1.0 - 3.0 * delta) / 2.0, 0.0)
    lam2_hi = min(delta / 2.0, room)
    out: list[DurParams] = []
    while len(out) < count:
        m = max(2 * (count - len(out)), 64)
        lam2 = rng.uniform(0.0, lam2_hi, size=m) if lam2_hi > 0 else np.zeros(m)
        budget = np.maximum(room - lam2, 0.0)
        a, b = rng.uniform(size=(2, m))
        flip = a + b > 1.0
        a = np.where(flip, 1.0 - a, a)
        b = np.where(flip, 1.0 - b, b)
        lam1 = delta / 2.0 + budget * a
        lam3 = delta / 2.0 + budget * b
        s = lam1 + lam2 + lam3
        lam0p = (1.0 - 2.0 * s + delta) / 2.0
        lam0m = np.maximum(lam0p - delta, 0.0)
        ok = (lam0p >= lam1) & (lam0p >= lam3) & (lam0p >= lam2) & (lam0p >= lam0m)
        ok &= 2.0 * lam2 < delta
        for row in np.stack([lam0p, lam0m, lam1, lam2, lam3], axis=1)[ok]:
            if len(out) == count:
                break
            out.append(DurParams(*map(float, row)))
    return out
