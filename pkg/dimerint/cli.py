"""
Command-line front end of dimerint.

Every computation is a subcommand writing a table to standard output (or to
--out) as CSV with fixed headers, or as JSON mirroring the same records.
Log records go to standard error.

Subcommands
-----------
    criticality   regime of (a, b) and the numerical torus-root verdict
    roots         |r_{i,+-}| over a theta grid
    green         closed-form Green's function next to the truncated solve
    invk          one inverse Kasteleyn entry, or a sweep over a rectangle
    asymptote     leading asymptotics against quadrature along a schedule
    oracle        counting, window and truncated-solve cross-checks
    validate      the invariant suites

Exit status is 0 on success, 1 on usage or precondition errors, 2 on
numerical failures and 3 when a check or suite fails.

Version: 1.0.0
"""

import argparse
import csv
import dataclasses
import json
import math
import sys

from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from dimerint.core.asymptotics import AsymptoticCase, Regime, ratio_probe
from dimerint.core.errors import DimerNumericalError, PreconditionError
from dimerint.core.inverse import INVK_HEADER, invk_entry, invk_sweep
from dimerint.core.lattice import Arrow, FiniteWindow, black, white
from dimerint.core.oracle import (compare_window_entries, matching_count_check,
                                  truncated_green_solve)
from dimerint.core.greens import green_matrix
from dimerint.core.spectral import is_critical, root_norm_profile, torus_root_search
from dimerint.core.validation import LEVELS, format_report, report_header, run_suites
from dimerint.setup.run_setup import OUTPUT_FORMATS, RunConfig, RunSetup

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_CHECK_FAILED = 3

ARROWS = [arrow.value for arrow in Arrow]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """
    ArgumentParser that raises UsageError instead of exiting with status 2.
    """

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclasses.dataclass
class Table:
    header: Tuple[str, ...]
    rows: List[Tuple]
    meta: Dict[str, Any] = dataclasses.field(default_factory=dict)
    status: int = EXIT_OK


def _format_value(value: Any, precision: int) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{precision}g}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(table: Table, run: RunConfig, stream: TextIO) -> None:
    """
    Write a table as CSV (header first, footer metadata as '#' lines) or as
    JSON {"records": [...], **meta}.
    """

    if run.output_format == "json":
        records = [{key: _json_value(value) for key, value in zip(table.header, row)}
                   for row in table.rows]
        payload = {"records": records}
        payload.update({key: _json_value(value) for key, value in table.meta.items()})
        json.dump(payload, stream, indent=2)
        stream.write("\n")
        return

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_format_value(value, run.precision) for value in row])
    for key, value in table.meta.items():
        stream.write(f"# {key}={_format_value(value, run.precision)}\n")


def _int_range(text: str) -> range:
    """
    Parse 'lo:hi' (inclusive) or a single integer.
    """

    try:
        if ":" in text:
            lo, hi = (int(part) for part in text.split(":", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo:hi' or an integer, got '{text}'")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range '{text}'")
    return range(lo, hi + 1)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _theta(args) -> complex:
    return complex(np.exp(1j * args.theta))


def cmd_criticality(args, run: RunConfig) -> Table:
    params = run.params
    regime = "critical" if is_critical(params) else "non-critical"
    return Table(header=("a", "b", "regime", "abs_diff", "torus_root"),
                 rows=[(params.a, params.b, regime, abs(params.a - params.b),
                        torus_root_search(params, args.resolution))])


def cmd_roots(args, run: RunConfig) -> Table:
    profile = root_norm_profile(run.params, args.samples)
    return Table(header=("theta", "r1p", "r1m", "r2p", "r2m"),
                 rows=[tuple(float(v) for v in row) for row in profile])


def cmd_green(args, run: RunConfig) -> Table:
    omega = _theta(args)
    ns = args.n
    N = max(abs(ns[0]), abs(ns[-1]), abs(args.n0)) + 20
    truncated = truncated_green_solve(args.n0, omega, N, run.params)

    pairs = [(i, j) for i in Arrow for j in Arrow]
    if args.i is not None:
        pairs = [(i, j) for i, j in pairs if i.value == args.i]
    if args.j is not None:
        pairs = [(i, j) for i, j in pairs if j.value == args.j]

    rows = []
    for n in ns:
        closed = green_matrix(n, args.n0, omega, run.params)
        reference = truncated.at(n)
        for i, j in pairs:
            a, b = (0 if i is Arrow.UP else 1), (0 if j is Arrow.UP else 1)
            rows.append((n, i.value, j.value,
                         closed[a, b].real, closed[a, b].imag,
                         reference[a, b].real, reference[a, b].imag))
    return Table(header=("n", "i", "j", "re", "im", "trunc_re", "trunc_im"), rows=rows)


def cmd_invk(args, run: RunConfig) -> Table:
    if args.sweep:
        entries = invk_sweep(args.i, args.j, args.n0, args.n, args.m,
                             run.params, run.quadrature)
    else:
        if len(args.n) != 1 or len(args.m) != 1:
            raise UsageError("invk: --n and --m take single values unless --sweep is given")
        entries = [invk_entry(args.i, args.j, args.n0, args.n[0], args.m[0],
                              run.params, run.quadrature)]
    return Table(header=INVK_HEADER, rows=[entry.as_row() for entry in entries])


def cmd_asymptote(args, run: RunConfig) -> Table:
    case = AsymptoticCase(kind=Regime(args.case),
                          params=run.params,
                          i=Arrow(args.i),
                          j=Arrow(args.j),
                          n=args.n,
                          n0=args.n0,
                          m=args.m,
                          p=args.p)
    result = ratio_probe(case, args.schedule, run.quadrature)
    return Table(header=("var", "asymptotic", "quadrature", "ratio"),
                 rows=[row.as_row() for row in result.rows],
                 meta={"decay_exponent": result.decay_exponent})


def _oracle_count(args, run: RunConfig) -> Table:
    window = FiniteWindow(args.n_range[0], args.n_range[-1], args.m_range[0], args.m_range[-1])
    check = matching_count_check(window, run.params)
    return Table(header=("det_abs", "enum_weighted", "agree"),
                 rows=[(check.det_abs, check.enum_weighted, check.agree)],
                 status=EXIT_OK if check.agree else EXIT_CHECK_FAILED)


def _oracle_window(args, run: RunConfig) -> Table:
    probe = (white(Arrow(args.i), args.n, args.m), black(Arrow(args.j), args.n0, 0))
    comparison = compare_window_entries([probe], run.params, args.margin, args.right_margin,
                                        run.quadrature)[0]
    return Table(header=("white", "black", "window", "integral", "error"),
                 rows=[(str(comparison.white), str(comparison.black), comparison.window_value,
                        comparison.integral_value, comparison.error)])


def _oracle_truncated(args, run: RunConfig) -> Table:
    omega = _theta(args)
    N = args.N if args.N is not None else abs(args.n0) + 40
    truncated = truncated_green_solve(args.n0, omega, N, run.params)
    worst = 0.0
    for n in range(-(N - 10), N - 9):
        closed = green_matrix(n, args.n0, omega, run.params)
        worst = max(worst, float(np.max(np.abs(closed - truncated.at(n)))))
    return Table(header=("n0", "theta", "N", "max_deviation"),
                 rows=[(args.n0, args.theta, N, worst)])


ORACLE_KINDS = {
    "count": _oracle_count,
    "window": _oracle_window,
    "truncated": _oracle_truncated,
}


def cmd_oracle(args, run: RunConfig) -> Table:
    return ORACLE_KINDS[args.kind](args, run)


def cmd_validate(args, run: RunConfig) -> Table:
    results = run_suites(args.level, run.quadrature)
    failed = any(not r.passed for r in results)
    timed = args.verbose
    report = format_report(results, timed)
    return Table(header=report_header(timed),
                 rows=[r.as_row(timed) for r in results],
                 meta={"report": report} if run.output_format == "json" else {},
                 status=EXIT_CHECK_FAILED if failed else EXIT_OK)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--a", type=float, default=1.0, help="vertical weight a (default 1)")
    common.add_argument("--b", type=float, default=4.0, help="vertical weight b (default 4)")
    common.add_argument("--tol", type=float, default=None, help="quadrature absolute tolerance")
    common.add_argument("--out", default=None, help="output file (default: standard output)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="csv or json")
    common.add_argument("--config", default=None, help="configuration file")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    parser = _Parser(prog="dimerint",
                     description="Inverse Kasteleyn entries, Green's functions and "
                                 "asymptotics of the interface-weighted dimer model.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("criticality", parents=[common], help="classify (a, b)")
    p.add_argument("--resolution", type=int, default=200, help="theta samples of the torus search")
    p.set_defaults(func=cmd_criticality)

    p = sub.add_parser("roots", parents=[common], help="root norms over theta")
    p.add_argument("--samples", type=int, default=256)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("green", parents=[common], help="Green's function against the truncated solve")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--n", type=_int_range, default=_int_range("-5:5"), help="column range lo:hi")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--i", choices=ARROWS, default=None)
    p.add_argument("--j", choices=ARROWS, default=None)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("invk", parents=[common], help="inverse Kasteleyn entries")
    p.add_argument("--i", choices=ARROWS, required=True)
    p.add_argument("--j", choices=ARROWS, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--n", type=_int_range, required=True, help="column, or lo:hi with --sweep")
    p.add_argument("--m", type=_int_range, required=True, help="row, or lo:hi with --sweep")
    p.add_argument("--sweep", action="store_true")
    p.set_defaults(func=cmd_invk)

    p = sub.add_parser("asymptote", parents=[common], help="ratio probe of a leading term")
    p.add_argument("--case", choices=[c.value for c in Regime], required=True)
    p.add_argument("--i", choices=ARROWS, default="up")
    p.add_argument("--j", choices=ARROWS, default="up")
    p.add_argument("--n0", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--schedule", type=_int_list, required=True,
                   help="comma-separated values; write --schedule=-12,-16 for negative ones")
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("oracle", parents=[common], help="brute-force cross-checks")
    p.add_argument("--kind", choices=sorted(ORACLE_KINDS), required=True)
    p.add_argument("--n-range", type=_int_range, default=_int_range("0:1"),
                   help="face columns of the counting window")
    p.add_argument("--m-range", type=_int_range, default=_int_range("0:1"),
                   help="face rows of the counting window")
    p.add_argument("--i", choices=ARROWS, default="up")
    p.add_argument("--j", choices=ARROWS, default="up")
    p.add_argument("--n0", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--margin", type=int, default=20)
    p.add_argument("--right-margin", type=int, default=None)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--N", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", parents=[common], help="run the invariant suites")
    p.add_argument("--level", choices=LEVELS, default="fast")
    p.set_defaults(func=cmd_validate)

    return parser


def _emit(table: Table, run: RunConfig) -> None:
    if run.output_path is None:
        write_table(table, run, sys.stdout)
        return
    with open(run.output_path, "w", newline="") as stream:
        write_table(table, run, stream)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand and return its exit status.
    """

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE

    setup = RunSetup(args.config)
    try:
        setup.initialize_config()
        logger = setup.initialize_logger("DEBUG" if args.verbose else None)
        run = setup.build_run_config(args.a, args.b, args.out, args.tol, args.format)
    except (TypeError, ValueError, OSError) as e:
        print(f"dimerint: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        table = args.func(args, run)
        _emit(table, run)
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except DimerNumericalError as e:
        logger.error(f"Numerical failure: {e}", exc_info=args.verbose)
        return EXIT_NUMERICAL
    except (PreconditionError, TypeError, ValueError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Cannot write output: {e}")
        return EXIT_USAGE

    return table.status


if __name__ == "__main__":
    sys.exit(main())
