"""Verifiers that check the class-S results numerically and, where possible, exactly.

Each verifier returns a :class:`Report` made of named :class:`CheckResult`
records.  Per-sample work is independent, so the sample-driven verifiers
accept ``workers`` and fan out over a process pool; results come back in
sample order, so reports never depend on the degree of parallelism.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import analysis as an
from . import qlinalg as ql
from .cvdc import CNOT_AC, apply_unitary, measure_qubit, run_deterministic
from .dur_states import (
    RHO_PRIME,
    DurParams,
    build_sigma,
    build_tau,
    psi,
    sample_params,
    sample_slice,
    sigma_delta_params,
)

CLOSED_VS_ORACLE_TOL = 1e-10
BOUND_TOL = 1e-12
MAX_COUNTEREXAMPLES = 20
THIRD = 1.0 / 3.0


def default_delta_grid(points: int = 100) -> list[float]:
    """``points`` evenly spaced values k/(3*points), k = 1..points, ending at 1/3."""
    return [k / (3.0 * points) for k in range(1, points + 1)]


@dataclass
class CheckResult:
    name: str
    passed: bool
    counterexamples: list = field(default_factory=list)
    worst_residual: float = 0.0
    details: dict = field(default_factory=dict)


@dataclass
class Report:
    name: str
    checks: list[CheckResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        for k, v in other.info.items():
            self.info[f"{other.name}.{k}"] = v

    def to_dict(self) -> dict:
        return round_floats({"name": self.name, "passed": self.passed, "info": self.info, "checks": [asdict(c) for c in self.checks]})


def round_floats(obj):
    """Recursively round floats to 15 significant digits for stable output."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}") if math.isfinite(obj) else obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    if isinstance(obj, np.generic):
        return round_floats(obj.item())
    return obj


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _check(name: str, bad: list, worst: float = 0.0, **details) -> CheckResult:
    return CheckResult(name, not bad, bad[:MAX_COUNTEREXAMPLES], float(worst), details)


# ------------------------------------------------------------ per-sample oracle


@dataclass(frozen=True)
class SampleEval:
    index: int
    params: DurParams
    in_S: bool
    in_S_oracle: bool
    boundary: bool
    p_e: float
    p_e_closed: float
    neg_closed: float
    neg_oracle: float
    det_closed: float
    det_oracle: float
    det_gap: float

    @property
    def residual_prob(self) -> float:
        return abs(max(self.neg_closed, 0.0) - self.neg_oracle)

    @property
    def residual_det(self) -> float:
        return abs(self.det_closed - self.det_oracle)

    def summary(self) -> dict:
        return {"index": self.index, "params": self.params.to_dict()}


def evaluate_sample(item: tuple[int, DurParams]) -> SampleEval:
    index, p = item
    p_e, neg_oracle = an.avg_entanglement_oracle(p)
    return SampleEval(
        index=index,
        params=p,
        in_S=an.in_class_S(p),
        in_S_oracle=an.in_class_S_oracle(p),
        boundary=an.near_class_boundary(p),
        p_e=p_e,
        p_e_closed=an.success_probability_closed_form(p),
        neg_closed=an.avg_entanglement_closed_form(p),
        neg_oracle=neg_oracle,
        det_closed=an.final_negativity_closed_form(p),
        det_oracle=an.final_negativity_oracle(p),
        det_gap=an.deterministic_predicate_gap(p),
    )


def evaluate_samples(samples: Sequence[DurParams], workers: int = 1) -> list[SampleEval]:
    return _map(evaluate_sample, list(enumerate(samples)), workers)


# ------------------------------------------------------------ class S membership + oracle equivalence


def verify_theorem1(samples: Sequence[DurParams] | None = None, *, evals: list[SampleEval] | None = None, workers: int = 1) -> Report:
    """Class-S membership by inequalities versus the matrix characterization,
    plus closed-form versus simulated entanglement on every sample."""
    if evals is None:
        evals = evaluate_samples(samples, workers)
    report = Report("t1")
    interior = [e for e in evals if not e.boundary]
    bad = [e.summary() | {"in_S": e.in_S, "oracle": e.in_S_oracle} for e in interior if e.in_S != e.in_S_oracle]
    report.checks.append(
        _check("t1-iff", bad, 0.0, evaluated=len(interior), boundary_excluded=len(evals) - len(interior), in_S=sum(e.in_S for e in interior))
    )

    worst = max((max(abs(e.p_e - e.p_e_closed), abs(e.p_e - (1 - 2 * e.params.lam1 - 2 * e.params.lam3))) for e in evals), default=0.0)
    bad = [e.summary() for e in evals if max(abs(e.p_e - e.p_e_closed), abs(e.p_e - (1 - 2 * e.params.lam1 - 2 * e.params.lam3))) > BOUND_TOL]
    report.checks.append(_check("success-probability-closed-form", bad, worst, tolerance=BOUND_TOL))

    worst = max((e.residual_prob for e in evals), default=0.0)
    bad = [e.summary() | {"residual": e.residual_prob} for e in evals if e.residual_prob > CLOSED_VS_ORACLE_TOL]
    in_s = [e for e in evals if e.in_S]
    worst_s = max((abs(e.neg_closed - e.neg_oracle) for e in in_s), default=0.0)
    bad += [e.summary() for e in in_s if abs(e.neg_closed - e.neg_oracle) > CLOSED_VS_ORACLE_TOL]
    report.checks.append(
        _check("probabilistic-closed-vs-oracle", bad, max(worst, worst_s), tolerance=CLOSED_VS_ORACLE_TOL, samples=len(evals), samples_in_S=len(in_s))
    )

    worst = max((e.residual_det for e in evals), default=0.0)
    bad = [e.summary() | {"residual": e.residual_det} for e in evals if e.residual_det > CLOSED_VS_ORACLE_TOL]
    report.checks.append(_check("deterministic-closed-vs-oracle", bad, worst, tolerance=CLOSED_VS_ORACLE_TOL, samples=len(evals)))

    clear = [e for e in evals if abs(e.det_gap) >= an.EPS]
    bad = [e.summary() for e in clear if (e.det_gap > 0) != (e.det_oracle > an.ZERO_NEG)]
    report.checks.append(
        _check("deterministic-predicate", bad, 0.0, evaluated=len(clear), boundary_excluded=len(evals) - len(clear), entangled=sum(e.det_gap > 0 for e in clear))
    )
    report.info["samples"] = len(evals)
    return report


# ------------------------------------------------------------ Delta bound


def verify_theorem2(samples: Sequence[DurParams], delta_grid: Iterable[float] | None = None) -> Report:
    """0 < Δ <= 1/3 on class S, and σ_Δ in S for every grid Δ (tightness)."""
    grid = list(delta_grid) if delta_grid is not None else default_delta_grid()
    report = Report("t2")
    members = [(i, p) for i, p in enumerate(samples) if an.in_class_S(p)]
    bad = [{"index": i, "Delta": p.Delta} for i, p in members if not (0.0 < p.Delta <= THIRD + BOUND_TOL)]
    worst = max((p.Delta - THIRD for _, p in members), default=0.0)
    report.checks.append(_check("t2-delta-bound", bad, max(worst, 0.0), samples=len(samples), in_S=len(members)))

    # Δ <= (λ0+ + 2λ1 + 2λ3)/3 is the intermediate step of the bound
    gaps = [(i, p.Delta - (p.lam0p + 2 * p.lam1 + 2 * p.lam3) / 3.0) for i, p in members]
    bad = [{"index": i, "excess": g} for i, g in gaps if g > BOUND_TOL]
    report.checks.append(_check("t2-intermediate-bound", bad, max((g for _, g in gaps), default=0.0)))

    bad = []
    for d in grid:
        p = sigma_delta_params(d)
        if not (an.in_class_S(p) and an.in_class_S_oracle(p)):
            bad.append({"Delta": d})
    report.checks.append(_check("t2-tightness", bad, 0.0, grid_points=len(grid)))
    return report


# ------------------------------------------------------------ maxima on Delta slices


def conditioned_samples(delta_grid: Iterable[float], samples_per_delta: int, seed: int) -> list[tuple[float, list[DurParams]]]:
    rng = np.random.default_rng(seed)
    return [(float(d), sample_slice(d, samples_per_delta, rng)) for d in delta_grid]


def verify_theorem3(delta_grid: Iterable[float], samples_per_delta: int, seed: int = 0) -> Report:
    """σ_Δ maximizes the average probabilistic entanglement Δ - 2λ2 on each Δ-slice of S."""
    report = Report("t3")
    slices = conditioned_samples(delta_grid, samples_per_delta, seed)
    over, outside, not_strict, attain = [], [], [], []
    worst = 0.0
    maxima = {}
    for d, ps in slices:
        vals = [an.avg_entanglement_closed_form(p) for p in ps]
        if vals:
            maxima[repr(d)] = max(vals)
            worst = max(worst, max(vals) - d)
        over += [{"Delta": d, "value": v} for v in vals if v > d + BOUND_TOL]
        outside += [{"Delta": d, "params": p.to_dict()} for p in ps if not an.in_class_S(p)]
        not_strict += [{"Delta": d, "params": p.to_dict()} for p, v in zip(ps, vals) if p.lam2 > 0 and not v < d]
        s = sigma_delta_params(d)
        p_e, oracle = an.avg_entanglement_oracle(s)
        closed = an.avg_entanglement_closed_form(s)
        if closed != s.Delta or abs(oracle - d) > CLOSED_VS_ORACLE_TOL:
            attain.append({"Delta": d, "closed": closed, "oracle": oracle})
    report.checks.append(_check("t3-upper-bound", over, worst, samples_per_delta=samples_per_delta, grid_points=len(slices)))
    report.checks.append(_check("t3-samples-in-S", outside))
    report.checks.append(_check("t3-strict-below-when-lam2-positive", not_strict))
    report.checks.append(_check("t3-sigma-delta-attains", attain))
    report.info["max_by_delta"] = maxima
    return report


ORACLE_SPOT_CHECKS = 5


def verify_theorem4(delta_grid: Iterable[float], samples_per_delta: int, seed: int = 0) -> Report:
    """σ_Δ maximizes the deterministic-variant negativity, (√2-1)Δ, on each Δ-slice of S."""
    report = Report("t4")
    slices = conditioned_samples(delta_grid, samples_per_delta, seed)
    over, domain, lemma, attain, spot = [], [], [], [], []
    worst = worst_spot = 0.0
    for d, ps in slices:
        cap = an.SQRT2M1 * d
        for p in ps:
            v = an.final_negativity_closed_form(p)
            worst = max(worst, v - cap)
            if v > cap + BOUND_TOL:
                over.append({"Delta": d, "value": v, "params": p.to_dict()})
            x = p.lam1 + p.lam3
            if not (d - BOUND_TOL <= x <= (1 - d) / 2 + BOUND_TOL):
                domain.append({"Delta": d, "lam1+lam3": x})
            elif v > an.lemma_f(min(max(x, d), (1 - d) / 2), d) + BOUND_TOL:
                lemma.append({"Delta": d, "params": p.to_dict()})
        for p in ps[:ORACLE_SPOT_CHECKS]:
            r = abs(an.final_negativity_oracle(p) - an.final_negativity_closed_form(p))
            worst_spot = max(worst_spot, r)
            if r > CLOSED_VS_ORACLE_TOL:
                spot.append({"Delta": d, "residual": r})
        s = sigma_delta_params(d)
        closed, oracle = an.final_negativity_closed_form(s), an.final_negativity_oracle(s)
        if abs(closed - cap) > BOUND_TOL or abs(oracle - cap) > CLOSED_VS_ORACLE_TOL:
            attain.append({"Delta": d, "closed": closed, "oracle": oracle})
    report.checks.append(_check("t4-upper-bound", over, worst, samples_per_delta=samples_per_delta, grid_points=len(slices)))
    report.checks.append(_check("t4-domain-bound", domain))
    report.checks.append(_check("t4-lemma-bound", lemma))
    report.checks.append(_check("t4-oracle-spot-check", spot, worst_spot))
    report.checks.append(_check("t4-sigma-delta-attains", attain))

    head = an.final_negativity_oracle(RHO_PRIME)
    target = an.SQRT2M1 / 3.0
    r = abs(head - target)
    report.checks.append(_check("t4-headline-one-third", [] if r <= CLOSED_VS_ORACLE_TOL else [{"value": head}], r, value=head, expected=target))
    return report


def verify_lemma1(delta_grid: Iterable[float], points: int = 1000) -> Report:
    """f(x) = sqrt(x²+Δ²) - x is strictly decreasing with maximum (√2-1)Δ at x = Δ."""
    report = Report("lemma1")
    mono, peak = [], []
    worst = 0.0
    for d in delta_grid:
        xs, fs = an.lemma_f_grid(d, points)
        # at Δ = 1/3 the domain collapses to a point and there is nothing to order
        if xs[-1] - xs[0] > 1e-9 and not np.all(np.diff(fs) < 0):
            mono.append({"Delta": d})
        deriv = xs / np.sqrt(xs**2 + d**2) - 1.0
        if np.any(deriv >= 0):
            mono.append({"Delta": d, "derivative_max": float(deriv.max())})
        r = abs(an.lemma_f(d, d) - an.SQRT2M1 * d)
        worst = max(worst, r)
        if r > BOUND_TOL or fs.max() > an.lemma_f(d, d) + BOUND_TOL or an.lemma_f(d, d) < an.lemma_f((1 - d) / 2, d):
            peak.append({"Delta": d})
    report.checks.append(_check("lemma1-strictly-decreasing", mono))
    report.checks.append(_check("lemma1-maximum-at-delta", peak, worst))
    return report


# ------------------------------------------------------------ uniqueness at Δ = 1/3

RHO_PRIME_EXACT = (Fraction(1, 3), Fraction(0), Fraction(1, 6), Fraction(0), Fraction(1, 6))


def _class_closure_constraints(delta: Fraction):
    """Rows (a, b) meaning a·x >= b over x = (λ0+, λ0-, λ1, λ2, λ3), plus equalities."""
    eye = [[Fraction(int(i == j)) for j in range(5)] for i in range(5)]
    ge = []
    for i in range(5):
        ge.append((eye[i], Fraction(0)))
        ge.append(([-v for v in eye[i]], Fraction(-1)))
    for k in range(1, 5):
        ge.append(([a - b for a, b in zip(eye[0], eye[k])], Fraction(0)))
    ge.append(([2 * v for v in eye[2]], delta))
    ge.append(([2 * v for v in eye[4]], delta))
    ge.append(([-2 * v for v in eye[3]], -delta))  # closure of 2λ2 < Δ
    eq = [
        ([Fraction(1), Fraction(-1), Fraction(0), Fraction(0), Fraction(0)], delta),
        ([Fraction(1), Fraction(1), Fraction(2), Fraction(2), Fraction(2)], Fraction(1)),
    ]
    return ge, eq


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    n = len(rows[0])
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, len(m)) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(len(m)):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def exact_vertices(delta: Fraction) -> list[tuple[Fraction, ...]]:
    """Vertices of the closure of the Δ-slice of S, in exact rational arithmetic."""
    ge, eq = _class_closure_constraints(delta)
    found = set()
    for combo in itertools.combinations(ge, 3):
        rows = [a for a, _ in eq] + [a for a, _ in combo]
        rhs = [b for _, b in eq] + [b for _, b in combo]
        x = _solve_exact(rows, rhs)
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(row, x)) >= b for row, b in ge):
            found.add(tuple(x))
    return sorted(found)


def _grid_worst_distance(margin: float, target: np.ndarray) -> dict:
    """Floating grid over (λ0-, λ1, λ2) around the ρ′ point; λ3 and λ0+ follow from the constraints."""
    delta = THIRD - margin
    h = min(1e-3, margin / 4.0)
    radius = 4.0 * margin
    k = int(math.ceil(radius / h))
    offs = np.arange(-k, k + 1) * h
    l0m = target[1] + offs
    l1 = target[2] + offs
    l2 = target[3] + offs
    L0M, L1, L2 = np.meshgrid(l0m, l1, l2, indexing="ij")
    L0P = L0M + delta
    L3 = (1.0 - delta - 2.0 * L0M) / 2.0 - L1 - L2
    pts = np.stack([L0P, L0M, L1, L2, L3], axis=-1).reshape(-1, 5)
    slack = 1e-15
    ok = np.all(pts >= -slack, axis=1) & np.all(pts <= 1 + slack, axis=1)
    ok &= np.all(pts[:, :1] >= pts[:, 1:] - slack, axis=1)
    ok &= 2 * pts[:, 2] >= delta - slack
    ok &= 2 * pts[:, 4] >= delta - slack
    ok &= 2 * pts[:, 3] < delta
    feas = pts[ok]
    free = feas[:, 1:4] - target[1:4]
    on_edge = bool(np.any(np.abs(free) >= k * h - h / 2)) if len(feas) else False
    worst = float(np.max(np.abs(feas - target))) if len(feas) else float("nan")
    return {"margin": margin, "step": h, "feasible_points": int(len(feas)), "worst_distance": worst, "box_contains_region": not on_edge}


def verify_uniqueness_at_third(tolerance: float = an.EPS) -> Report:
    """At Δ = 1/3 the class-S constraints pin the weights to ρ′; for Δ = 1/3 - m the
    feasible set shrinks onto that point as m -> 0."""
    report = Report("uniqueness")
    verts = exact_vertices(Fraction(1, 3))
    bad = [] if verts == [RHO_PRIME_EXACT] else [{"vertices": [[str(v) for v in x] for x in verts]}]
    report.checks.append(_check("uniqueness-exact", bad, 0.0, vertices=[[str(v) for v in x] for x in verts]))

    p = DurParams(*map(float, verts[0])) if len(verts) == 1 else RHO_PRIME
    sigma_prime = apply_unitary(rho_prime_mixture(), CNOT_AC)
    r = ql.max_abs_diff(build_sigma(p), sigma_prime)
    report.checks.append(_check("uniqueness-state-is-sigma-prime", [] if r <= BOUND_TOL else [{"residual": r}], r))

    margins = [10.0**-k for k in range(2, 16) if 10.0**-k >= tolerance * (1 - 1e-9)]
    target = np.array([float(v) for v in RHO_PRIME_EXACT])
    rows, bad_exact, bad_grid = [], [], []
    prev = None
    for m in margins:
        mf = Fraction(m)
        vs = exact_vertices(Fraction(1, 3) - mf)
        worst = max(max(abs(v - t) for v, t in zip(x, RHO_PRIME_EXACT)) for x in vs)
        g = _grid_worst_distance(m, target)
        rows.append({"margin": m, "exact_worst_distance": float(worst), "vertices": len(vs), "grid": g})
        if worst > 5 * mf or (prev is not None and worst > prev):
            bad_exact.append({"margin": m, "worst": float(worst)})
        if g["feasible_points"] == 0 or not g["box_contains_region"] or g["worst_distance"] > float(worst) + 1e-12:
            bad_grid.append(g)
        prev = worst
    report.checks.append(_check("uniqueness-exact-shrinks", bad_exact, rows[-1]["exact_worst_distance"] if rows else 0.0))
    report.checks.append(_check("uniqueness-grid-shrinks", bad_grid, rows[-1]["grid"]["worst_distance"] if rows else 0.0))
    report.info["margins"] = rows
    return report


# ------------------------------------------------------------ the original procedure


def rho_prime_mixture() -> np.ndarray:
    """(1/3)Ψ0+ + (1/6)(Ψ1+ + Ψ1- + Ψ3+ + Ψ3-), written out term by term."""
    return psi(0, "+") / 3 + (psi(1, "+") + psi(1, "-") + psi(3, "+") + psi(3, "-")) / 6


PHI_PLUS = ql.projector(np.array([1, 0, 0, 1]) / math.sqrt(2))


def reproduce(seed: int = 0, count: int = 2000) -> Report:
    """The headline checklist of the original protocol and the class-S maxima."""
    report = Report("reproduce")
    rho_p = rho_prime_mixture()
    sigma_p = build_sigma(RHO_PRIME)

    r = ql.max_abs_diff(apply_unitary(sigma_p, CNOT_AC), rho_p)
    report.checks.append(_check("sigma-prime-to-rho-prime", [] if r <= BOUND_TOL else [{"residual": r}], r))

    b0, _ = measure_qubit(build_tau(RHO_PRIME), 2)
    r = max(abs(b0.probability - THIRD), ql.max_abs_diff(b0.post_state, PHI_PLUS))
    report.checks.append(_check("measurement-yields-phi-plus", [] if r <= BOUND_TOL else [{"probability": b0.probability}], r, probability=b0.probability))

    display = np.array([[1 / 2, 0, 0, 1 / 6], [0, 0, 0, 0], [0, 0, 1 / 3, 0], [1 / 6, 0, 0, 1 / 6]])
    r = ql.max_abs_diff(run_deterministic(RHO_PRIME), display)
    report.checks.append(_check("deterministic-state-matches-display", [] if r <= BOUND_TOL else [{"residual": r}], r))

    grid = default_delta_grid()
    t3 = verify_theorem3(grid, 200, seed)
    _, at_third = an.avg_entanglement_oracle(sigma_delta_params(THIRD))
    r = abs(at_third - THIRD)
    ok = t3.passed and r <= CLOSED_VS_ORACLE_TOL
    report.checks.append(_check("probabilistic-max-one-third", [] if ok else [{"value": at_third}], r, value=at_third))

    t4 = verify_theorem4(grid, 200, seed)
    head = an.final_negativity_oracle(RHO_PRIME)
    r = abs(head - an.SQRT2M1 / 3)
    ok = t4.passed and r <= CLOSED_VS_ORACLE_TOL
    report.checks.append(_check("deterministic-max-sqrt2-minus-1-over-3", [] if ok else [{"value": head}], r, value=head))

    t2 = verify_theorem2(sample_params(seed, count), grid)
    report.checks.append(_check("delta-bound-tightness", [] if t2.passed else [c.name for c in t2.checks if not c.passed]))

    u = verify_uniqueness_at_third()
    report.checks.append(_check("uniqueness-at-one-third", [] if u.passed else [c.name for c in u.checks if not c.passed]))
    report.info["seed"] = seed
    return report


# ------------------------------------------------------------ sweeps


@dataclass
class SweepRow:
    params: DurParams
    delta: float
    p_e: float
    neg_closed: float
    neg_oracle: float
    det_neg_closed: float
    det_neg_oracle: float
    residual_prob: float
    residual_det: float
    kind: str = "sample"

    CSV_FIELDS = ("delta", "p_e", "neg_closed", "neg_oracle", "det_neg_closed", "det_neg_oracle", "residual_prob", "residual_det")

    def csv_values(self) -> list[str]:
        return [f"{getattr(self, f):.15g}" for f in self.CSV_FIELDS]


def sweep_row(p: DurParams, kind: str = "sample") -> SweepRow:
    p_e, neg_oracle = an.avg_entanglement_oracle(p)
    neg_closed = an.avg_entanglement_closed_form(p)
    det_closed = an.final_negativity_closed_form(p)
    det_oracle = an.final_negativity_oracle(p)
    return SweepRow(
        params=p,
        delta=p.Delta,
        p_e=p_e,
        neg_closed=neg_closed,
        neg_oracle=neg_oracle,
        det_neg_closed=det_closed,
        det_neg_oracle=det_oracle,
        residual_prob=abs(neg_closed - neg_oracle),
        residual_det=abs(det_closed - det_oracle),
        kind=kind,
    )


def _sweep_item(item: tuple[DurParams, str]) -> SweepRow:
    return sweep_row(*item)


def sweep(delta_grid: Iterable[float], samples_per_delta: int, seed: int = 0, workers: int = 1) -> list[SweepRow]:
    """For each Δ: one σ_Δ row followed by ``samples_per_delta`` conditioned class-S samples."""
    items = []
    for d, ps in conditioned_samples(delta_grid, samples_per_delta, seed):
        items.append((sigma_delta_params(d), "sigma_delta"))
        items.extend((p, "sample") for p in ps)
    return _map(_sweep_item, items, workers)
