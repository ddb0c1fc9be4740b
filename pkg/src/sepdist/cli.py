"""Command-line front end.

Exit codes: 0 success (or all checks passed), 1 checks ran and some failed,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import analysis as an
from . import theorems as th
from .dur_states import DurParams, sample_params
from .errors import SepdistError

SUITES = ("all", "t1", "t2", "t3", "t4", "lemma", "uniqueness")
INPUT_TRACE_TOL = 1e-9


class UsageError(Exception):
    pass


def real(text: str) -> float:
    """Parse a float, also accepting exact fractions such as ``1/3``."""
    try:
        return float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepdist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write output here instead of stdout")

    def grid(p, steps=100):
        p.add_argument("--delta-min", type=real, default=1.0 / (3 * steps))
        p.add_argument("--delta-max", type=real, default=1.0 / 3.0)
        p.add_argument("--steps", type=_positive_int, default=steps)

    p = sub.add_parser("analyze", help="analyze one parameter point")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--lam", nargs=5, type=real, metavar=("LAM0P", "LAM0M", "LAM1", "LAM2", "LAM3"))
    src.add_argument("--params", metavar="FILE", help="JSON record {lam0p, lam0m, lam1, lam2, lam3}")
    common(p, seed=False)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--count", type=_positive_int, default=10000, help="simplex samples for t1/t2")
    p.add_argument("--samples-per-delta", type=_nonneg_int, default=1000)
    p.add_argument("--workers", type=_positive_int, default=1)
    grid(p)
    common(p)

    p = sub.add_parser("sweep", help="closed form vs oracle along a Delta grid (CSV)")
    grid(p, steps=10)
    p.add_argument("--samples-per-delta", type=_nonneg_int, default=10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)

    p = sub.add_parser("sample", help="evaluate seeded simplex samples")
    p.add_argument("--count", type=_positive_int, default=100)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)

    p = sub.add_parser("reproduce", help="headline checklist of the original protocol")
    p.add_argument("--count", type=_positive_int, default=2000)
    common(p)
    return parser


def delta_grid(args) -> list[float]:
    lo, hi, steps = args.delta_min, args.delta_max, args.steps
    if not (0.0 < lo <= hi <= 1.0 / 3.0 + 1e-15):
        raise UsageError(f"need 0 < delta-min <= delta-max <= 1/3, got [{lo!r}, {hi!r}]")
    hi = min(hi, 1.0 / 3.0)
    if steps == 1 or lo == hi:
        return [lo]
    return [float(x) for x in np.linspace(lo, hi, steps)]


def _load_params(args) -> DurParams:
    if args.lam is not None:
        return DurParams.from_values(args.lam, tol=INPUT_TRACE_TOL)
    try:
        with open(args.params) as fh:
            record = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read params file {args.params!r}: {exc}") from None
    if not isinstance(record, dict):
        raise UsageError("params file must hold a JSON object")
    return DurParams.from_dict(record, tol=INPUT_TRACE_TOL)


def analyze_point(p: DurParams) -> dict:
    report = an.check_conditions(p)
    p_e, neg_oracle = an.avg_entanglement_oracle(p)
    det_closed = an.final_negativity_closed_form(p)
    det_oracle = an.final_negativity_oracle(p)
    avg = an.avg_entanglement_closed_form(p)
    return th.round_floats(
        {
            "params": p.to_dict(),
            "Delta": p.Delta,
            "delta": p.delta,
            "conditions": report.to_dict(),
            "in_class_S": report.in_class_S,
            "p_e": p_e,
            "p_e_closed": an.success_probability_closed_form(p),
            "avg_entanglement_closed": max(avg, 0.0),
            "avg_entanglement_closed_raw": avg,
            "avg_entanglement_oracle": neg_oracle,
            "det_negativity_closed": det_closed,
            "det_negativity_oracle": det_oracle,
            "deterministic_entangled": an.deterministic_predicate(p),
        }
    )


def run_verify(args) -> th.Report:
    grid = delta_grid(args)
    report = th.Report(f"verify-{args.suite}", info={"seed": args.seed, "count": args.count})
    want = set(SUITES[1:]) if args.suite == "all" else {args.suite}
    samples = sample_params(args.seed, args.count) if want & {"t1", "t2"} else []
    if "t1" in want:
        report.extend(th.verify_theorem1(samples, workers=args.workers))
    if "t2" in want:
        report.extend(th.verify_theorem2(samples, grid))
    if "t3" in want:
        report.extend(th.verify_theorem3(grid, args.samples_per_delta, args.seed))
    if "t4" in want:
        report.extend(th.verify_theorem4(grid, args.samples_per_delta, args.seed))
    if "lemma" in want:
        report.extend(th.verify_lemma1(grid))
    if "uniqueness" in want:
        report.extend(th.verify_uniqueness_at_third())
    report.info["notes"] = [
        "ab|c separability of rho is certified via PPT; PPT implies separability within this family by a cited result",
    ]
    return report


def sweep_csv(rows: list[th.SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(th.SweepRow.CSV_FIELDS)
    for r in rows:
        w.writerow(r.csv_values())
    return buf.getvalue()


def sweep_json(rows: list[th.SweepRow]) -> str:
    recs = [{"kind": r.kind, "params": r.params.to_dict(), **{f: getattr(r, f) for f in th.SweepRow.CSV_FIELDS}} for r in rows]
    return _dumps(th.round_floats(recs))


SAMPLE_FIELDS = ("index", "lam0p", "lam0m", "lam1", "lam2", "lam3", "in_S", "in_S_oracle", "boundary",
                 "p_e", "neg_closed", "neg_oracle", "det_neg_closed", "det_neg_oracle")


def sample_records(evals: list[th.SampleEval]) -> list[dict]:
    out = []
    for e in evals:
        out.append(
            {
                "index": e.index,
                **e.params.to_dict(),
                "in_S": e.in_S,
                "in_S_oracle": e.in_S_oracle,
                "boundary": e.boundary,
                "p_e": e.p_e,
                "neg_closed": max(e.neg_closed, 0.0),
                "neg_oracle": e.neg_oracle,
                "det_neg_closed": e.det_closed,
                "det_neg_oracle": e.det_oracle,
            }
        )
    return th.round_floats(out)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            _emit(_dumps(analyze_point(_load_params(args))), args.out)
            return 0
        if args.command == "verify":
            report = run_verify(args)
            _emit(_dumps(report.to_dict()), args.out)
            _summary(report)
            return 0 if report.passed else 1
        if args.command == "sweep":
            rows = th.sweep(delta_grid(args), args.samples_per_delta, args.seed, args.workers)
            _emit(sweep_csv(rows) if args.format == "csv" else sweep_json(rows), args.out)
            bad = [r for r in rows if max(r.residual_prob, r.residual_det) > th.CLOSED_VS_ORACLE_TOL]
            return 1 if bad else 0
        if args.command == "sample":
            recs = sample_records(th.evaluate_samples(sample_params(args.seed, args.count), args.workers))
            if args.format == "json":
                text = _dumps({"seed": args.seed, "count": args.count, "samples": recs})
            else:
                buf = io.StringIO()
                w = csv.DictWriter(buf, SAMPLE_FIELDS, lineterminator="\n")
                w.writeheader()
                for r in recs:
                    w.writerow({k: (f"{v:.15g}" if isinstance(v, float) else v) for k, v in r.items()})
                text = buf.getvalue()
            _emit(text, args.out)
            return 0
        if args.command == "reproduce":
            report = th.reproduce(args.seed, args.count)
            _emit(_dumps(report.to_dict()), args.out)
            _summary(report)
            return 0 if report.passed else 1
    except (SepdistError, UsageError) as exc:
        print(f"sepdist: error: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown command {args.command!r}")
    return 2


def _summary(report: th.Report) -> None:
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}", file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())
