"""``numrad`` command-line interface.

Each subcommand writes one JSON document to stdout (or CSV for ``range``)
and a short human-readable summary to stderr. Exit codes: 0 success,
1 an inequality was violated, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import __version__
from . import bounds as bd
from . import ensemble as en
from . import io
from .errors import InequalityViolation, NumradError
from .matrix import as_matrix
from .radius import numerical_radius, numerical_range_boundary

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _emit(doc) -> None:
    sys.stdout.write(io.dumps(doc))
    sys.stdout.write("\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_square(path):
    return as_matrix(io.load_matrix(path), square=True, name=str(path))


def _status_line(checks) -> str:
    return ", ".join(f"{v.label} {v.status.value}" for v in checks)


def cmd_radius(args) -> int:
    t = _load_square(args.path)
    d = bd.OperatorData(t, coarse=args.grid)
    est = d.estimate
    verdict = bd.check_background(bd.CheckId.EQ_1_1, d, tol=args.tol)
    _emit(io.document("radius", {
        "radius": est.value,
        "theta_star": est.theta_star,
        "witness": io.vector_to_list(est.witness),
        "norm": d.norm,
        "grid_points": est.grid_points,
        "checks": [io.verdict_to_dict(verdict)],
    }, tol=args.tol))
    _note(f"radius {est.value:.12g}  norm {d.norm:.12g}  {_status_line([verdict])}")
    return EXIT_VIOLATION if verdict.failed else EXIT_OK


def cmd_bounds(args) -> int:
    rep = bd.bounds_report(_load_square(args.path), args.tol)
    _emit(io.document("bounds", io.bounds_report_to_dict(rep), tol=args.tol))
    _note(_status_line(rep.checks))
    return EXIT_VIOLATION if rep.failures else EXIT_OK


def cmd_offdiag(args) -> int:
    if not 1 <= args.n <= 3:
        raise UsageError(f"--n must be in 1..3, got {args.n}")
    r = as_matrix(io.load_matrix(args.path_r), name="R")
    s = as_matrix(io.load_matrix(args.path_s), name="S")
    rep = bd.pair_report(r, s, args.tol, farei_orders=(args.n,), commuting=False,
                         checks={bd.CheckId.COR_2_5, bd.CheckId.FAREI, bd.CheckId.SCALAR_COND})
    _emit(io.document("offdiag", {
        "radius": rep.radius_block,
        "half_sum": rep.half_sum,
        "norm_r": rep.norm_r,
        "norm_s": rep.norm_s,
        "gee": rep.gee_block,
        "checks": [io.verdict_to_dict(v) for v in rep.checks],
    }, tol=args.tol))
    _note(f"radius {rep.radius_block:.12g}  (||R||+||S||)/2 {rep.half_sum:.12g}  {_status_line(rep.checks)}")
    return EXIT_VIOLATION if rep.failures else EXIT_OK


def suite_document(summary: en.SuiteSummary) -> dict:
    spec = summary.spec
    return io.document("ensemble", {
        "ensemble": {"kind": spec.tag, "dim": spec.dim, "count": spec.count},
        "failed": summary.failed,
        "max_negative_slack": summary.max_negative_slack,
        "counts": summary.counts,
        "min_slack": summary.min_slack,
        "statistics": en.slack_statistics(summary.records),
        "violations": [
            {
                "sample_index": v["sample_index"],
                "verdict": io.verdict_to_dict(v["verdict"]),
                "sample": [io.matrix_to_doc(m) for m in
                           (v["sample"] if isinstance(v["sample"], tuple) else (v["sample"],))],
            }
            for v in summary.violations
        ],
        "digests": [rec.matrix_digest for rec in summary.records],
    }, tol=summary.tol, seed=spec.seed)


def cmd_ensemble(args) -> int:
    try:
        spec = en.EnsembleSpec.from_kind(args.kind, args.dim, args.seed, args.count)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    summary = en.run_suite(spec, args.tol)
    _emit(suite_document(summary))
    _note(f"{spec.tag} dim={spec.dim} count={spec.count} seed={spec.seed}: "
          f"{'FAILED' if summary.failed else 'ok'} ({len(summary.violations)} violations)")
    return EXIT_VIOLATION if summary.failed else EXIT_OK


def cmd_cain(args) -> int:
    if args.budget < 1:
        raise UsageError(f"--budget must be at least 1, got {args.budget}")
    rep = en.search_sqrt2_counterexample(args.dim, args.budget, args.seed, hermitian_only=args.hermitian)
    _emit(io.document("counterexample", {
        "found": rep.found,
        "matrix": io.matrix_to_doc(rep.matrix) if rep.found else None,
        "norm": rep.norm,
        "radius": rep.radius,
        "sqrt2_radius": 2 ** 0.5 * rep.radius,
        "dee": rep.dee,
        "inv_norm_sq_recip": rep.inv_norm_sq_recip,
        "samples_tried": rep.samples_tried,
        "sample_index": rep.sample_index,
        "hermitian_only": args.hermitian,
    }, seed=args.seed))
    if rep.found:
        _note(f"found after {rep.samples_tried} samples: ||A|| = {rep.norm:.12g} > "
              f"sqrt(2) w(A) = {2 ** 0.5 * rep.radius:.12g}; D(A) = {rep.dee:.6g} > "
              f"||A^-1||^-2 = {rep.inv_norm_sq_recip:.6g}")
    else:
        _note(f"no counterexample in {rep.samples_tried} samples")
    return EXIT_OK


def cmd_range(args) -> int:
    if args.points < 3:
        raise UsageError(f"--points must be at least 3, got {args.points}")
    boundary = numerical_range_boundary(_load_square(args.path), args.points)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["theta", "re", "im"])
        for theta, z in zip(boundary.thetas, boundary.points):
            w.writerow([io.format_float(float(theta)), io.format_float(z.real), io.format_float(z.imag)])
    finally:
        if out is not sys.stdout:
            out.close()
    _note(f"{args.points} boundary points written to {'stdout' if args.out == '-' else args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="numrad", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"numrad {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def tol_arg(sp):
        sp.add_argument("--tol", type=float, default=bd.DEFAULT_TOL, help="relative slack tolerance")

    sp = sub.add_parser("radius", help="numerical radius with witness vector")
    sp.add_argument("path")
    tol_arg(sp)
    sp.add_argument("--grid", type=int, default=512, help="coarse angular grid size (>= 8)")
    sp.set_defaults(func=cmd_radius)

    sp = sub.add_parser("bounds", help="all single-operator quantities and verdicts")
    sp.add_argument("path")
    tol_arg(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("offdiag", help="verdicts for the block operator [[0, R], [S, 0]]")
    sp.add_argument("path_r")
    sp.add_argument("path_s")
    tol_arg(sp)
    sp.add_argument("--n", type=int, default=1, help="power in the lower bound (1..3)")
    sp.set_defaults(func=cmd_offdiag)

    sp = sub.add_parser("ensemble", help="verify every check over a seeded random ensemble")
    sp.add_argument("--kind", required=True, help=f"one of {', '.join(en.KINDS)}; "
                                                  "nilpotent_perturbed:<eps> sets epsilon")
    sp.add_argument("--dim", type=int, default=4)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=42)
    tol_arg(sp)
    sp.set_defaults(func=cmd_ensemble)

    sp = sub.add_parser("cain", help="search for a counterexample to ||A|| <= sqrt(2) w(A)")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--budget", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--hermitian", action="store_true", help="restrict the search to Hermitian samples")
    sp.set_defaults(func=cmd_cain)

    sp = sub.add_parser("range", help="sample the numerical range boundary as CSV")
    sp.add_argument("path")
    sp.add_argument("--points", type=int, default=360)
    sp.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    sp.set_defaults(func=cmd_range)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InequalityViolation as exc:
        _note(f"violation: {exc}")
        if exc.matrix is not None:
            sample = exc.matrix if isinstance(exc.matrix, tuple) else (exc.matrix,)
            _note(io.dumps([io.matrix_to_doc(m) for m in sample]))
        return EXIT_VIOLATION
    except (UsageError, NumradError, ValueError, OSError) as exc:
        _note(f"numrad: error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
