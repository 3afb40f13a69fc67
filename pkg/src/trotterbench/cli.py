"""Command-line entry points.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 no real
solution from the coefficient solver.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_NO_SOLUTION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="trotterbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve-coeffs", help="solve the alternating-family coefficients")
    p.add_argument("--a4", type=float, required=True)
    p.add_argument("--branch", type=int, default=0)

    p = sub.add_parser("family-scan", help="scan the coefficient family over a4")
    p.add_argument("--from", dest="a4_from", type=float, required=True)
    p.add_argument("--to", dest="a4_to", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("expand", help="print the exponent-operator coefficient table")
    p.add_argument("--formula", required=True)
    p.add_argument("--ham", type=Path, required=True)
    p.add_argument("--max-order", type=int, default=3)

    p = sub.add_parser("check", help="print the design-condition residuals of a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--ham", type=Path, required=True)

    p = sub.add_parser("sweep", help="run a step-size sweep and write CSV")
    p.add_argument("--ham", type=Path, required=True)
    p.add_argument("--formula", action="append", required=True)
    p.add_argument("--s-max", type=float, required=True)
    p.add_argument("--s-min", type=float, required=True)
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--target", default="lowest")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("fit", help="fit a log-log slope from a sweep CSV column")
    p.add_argument("--csv", type=Path, required=True)
    p.add_argument("--column", default="exact_delta_e")
    p.add_argument("--formula", default=None, help="restrict to one formula name")
    p.add_argument("--auto-window", action="store_true")

    p = sub.add_parser("verify-claim", help="check the family's error-form claims")
    p.add_argument("--a4", type=float, default=-0.3)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--qubits", type=int, default=3)

    p = sub.add_parser("reproduce", help="regenerate a scaling study (CSV + figure)")
    p.add_argument("--figure", choices=("left", "middle", "right"), required=True)
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--a4", type=float, default=-0.3)
    return parser


def _target(value):
    return value if value == "lowest" else int(value)


def _cmd_solve_coeffs(args) -> int:
    from .designer import solve_w2

    sol = solve_w2(args.a4, branch=args.branch)
    for name, value in zip(("a1", "a2", "a3", "a4", "a5"), sol.a):
        print(f"{name} = {value!r}")
    print(f"branch = {sol.branch_id}")
    print(f"residuals = {sol.residuals[0]:.3e} {sol.residuals[1]:.3e} {sol.residuals[2]:.3e}")
    return EXIT_OK


def _cmd_family_scan(args) -> int:
    from .bench import write_family_csv
    from .designer import family_scan

    n = int(round((args.a4_to - args.a4_from) / args.step)) + 1
    values = np.round(args.a4_from + args.step * np.arange(n), 12)
    solutions, failures = family_scan(values)
    write_family_csv(solutions, args.out)
    print(f"wrote {args.out} ({len(solutions)} solutions, {len(failures)} a4 values without)")
    return EXIT_OK


def _load(args):
    from .formulas import parse_formula
    from .hamiltonians import load_hamiltonian_file

    h = load_hamiltonian_file(args.ham)
    return h, parse_formula(args.formula, h)


def _cmd_expand(args) -> int:
    from .expansion import expand_exponent

    h, f = _load(args)
    e = expand_exponent(f, max_order=args.max_order)
    for label in sorted(e.first_order):
        print(f"0\t{label}\t{e.first_order[label]!r}")
    for order in sorted(e.orders):
        for word in sorted(e.orders[order]):
            print(f"{order}\t[{','.join(word)}]\t{e.orders[order][word]!r}")
    return EXIT_OK


def _cmd_check(args) -> int:
    from .expansion import check_w2_conditions, expand_exponent

    _, f = _load(args)
    report = check_w2_conditions(expand_exponent(f, max_order=3))
    print(f"consistency      = {report.consistency:.6e}")
    print(f"first_commutator = {report.first_commutator:.6e}")
    print(f"balance          = {report.balance:.6e}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from .bench import SweepConfig, run_sweep, write_sweep_csv
    from .hamiltonians import hamiltonian_digest, load_hamiltonian_file

    h = load_hamiltonian_file(args.ham)
    cfg = SweepConfig(
        hamiltonian=h,
        formula_specs=tuple(args.formula),
        s_max=args.s_max,
        s_min=args.s_min,
        points=args.points,
        target=_target(args.target),
    )
    rows = run_sweep(cfg)
    write_sweep_csv(rows, args.out, digest=hamiltonian_digest(h))
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_fit(args) -> int:
    from .bench import CSV_COLUMNS, fit_slope, read_sweep_csv

    if args.column not in CSV_COLUMNS[1:-1]:
        raise ValueError(f"unknown column {args.column!r}")
    rows, _ = read_sweep_csv(args.csv)
    if args.formula is not None:
        rows = [r for r in rows if r.formula == args.formula]
    pairs = [(r.s, getattr(r, args.column)) for r in rows]
    fit = fit_slope(pairs, auto_window=args.auto_window)
    print(f"slope     = {fit.slope:.6f}")
    print(f"intercept = {fit.intercept:.6f}")
    print(f"r_squared = {fit.r_squared:.8f}")
    print(f"window    = [{fit.window[0]:.6g}, {fit.window[1]:.6g}] ({fit.n_points} points)")
    return EXIT_OK


def _cmd_verify_claim(args) -> int:
    from .bench import verify_claim

    report = verify_claim(args.a4, args.seed, n_qubits=args.qubits)
    print(f"alpha3            = {report.alpha3:.6g}")
    print(f"alpha3(composite) = {report.alpha3_composite:.6g}")
    print(f"alpha4            = {report.alpha4:.6g}")
    print(f"residual slope    = {report.residual_slope:.3f}")
    print(f"w2 shift slope    = {report.w2_delta_e_slope:.3f}")
    print(f"composite slope   = {report.composite_fit.slope:.3f}")
    print(
        f"|dE| at s=1e-3    : composite {abs(report.delta_e_composite_small):.3e}"
        f" vs self-pair {abs(report.delta_e_self_small):.3e}"
    )
    for name, ok in report.checks.items():
        print(f"[{'pass' if ok else 'FAIL'}] {name}")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def _cmd_reproduce(args) -> int:
    from .bench import reproduce_figures

    paths = reproduce_figures(
        args.figure,
        scale="paper" if args.paper_scale else "desk",
        out_dir=args.out,
        a4=args.a4,
        seed=args.seed,
    )
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


_COMMANDS = {
    "solve-coeffs": _cmd_solve_coeffs,
    "family-scan": _cmd_family_scan,
    "expand": _cmd_expand,
    "check": _cmd_check,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
    "verify-claim": _cmd_verify_claim,
    "reproduce": _cmd_reproduce,
}


def main(argv=None) -> int:
    from .designer import BranchOutOfRange, NoRealSolution
    from .linalg import EigenphaseAliasingError, NonHermitianError, NonUnitaryError
    from .spectro import AmbiguousMatchError, DegenerateTargetError

    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NoRealSolution as exc:
        print(f"no real solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (
        BranchOutOfRange,
        EigenphaseAliasingError,
        NonHermitianError,
        NonUnitaryError,
        AmbiguousMatchError,
        DegenerateTargetError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
