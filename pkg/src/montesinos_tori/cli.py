"""Command-line front end.

    montesinos-tori slopes   K(-1/2,1/3,1/7)
    montesinos-tori toroidal -1/2 2/5 1/7
    montesinos-tori verify   --max-n 8
    montesinos-tori census   --max-den 11 --query multi
    montesinos-tori paths    K(-1/2,1/3,1/7)

Knots are reported as their canonical representative; ``--mirror``
switches to its mirror image, which negates every slope.  Exit codes:
0 ok, 1 verification mismatch, 2 parse error, 3 not a knot, 4 excluded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from .classifier import (
    DEFAULT_EXCLUSIONS,
    ExcludedKnotError,
    census,
    find_toroidal,
    load_exclusions,
    verify_table,
)
from .diagram import ParseError, format_rational, parse_rational
from .edgepaths import DEFAULT_MAX_LENGTH, enumerate_skeletons, format_path, path_length
from .invariants import surface_report
from .knots import KnotParams, NotAKnotError, canonicalize, parse_knot, require_knot
from .slopes import boundary_slope
from .solver import solve_systems

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_NOT_KNOT, EXIT_EXCLUDED = 0, 1, 2, 3, 4


def fmt(x) -> str:
    return format_rational(x)


def fmt_knot(K: KnotParams) -> list:
    return [fmt(t) for t in K.ts]


# -- payload builders --------------------------------------------------------


def _resolve(tokens, mirror: bool):
    """(knot to report on, header fields) for the given notation."""
    K = parse_knot(tokens)
    require_knot(K)
    can = canonicalize(K)
    knot = can.knot.mirror() if mirror else can.knot
    header = {
        "input": str(K),
        "knot": fmt_knot(knot),
        "input_mirrored": can.mirrored,
        "mirror": mirror,
    }
    return knot, header


def _surface_fields(report) -> dict:
    return {
        "m_values": list(report.m_values),
        "sheets": report.sheets,
        "chi": report.chi_hat,
        "chi_F": report.chi_F,
        "boundary_count": report.boundary_count,
        "orientable": report.orientable,
    }


def slopes_payload(K: KnotParams, u_floor=1, max_length=DEFAULT_MAX_LENGTH) -> list:
    rows = []
    for s in solve_systems(K, u_floor, max_length):
        res = boundary_slope(s)
        report = surface_report(s, res.delta)
        row = {
            "u_bar": fmt(s.u_bar),
            "family": [fmt(x) for x in s.family] if s.family else None,
            "paths": [format_path(p) for p in s.paths],
            "lengths": [fmt(path_length(p)) for p in s.paths],
            "ebar": fmt(report.ebar),
            "tau": fmt(res.tau),
            "delta": fmt(res.delta),
        }
        row.update(_surface_fields(report))
        rows.append(row)
    return rows


def finding_record(f) -> dict:
    row = {
        "delta": fmt(f.delta),
        "u_bar": fmt(f.u_bar),
        "u_values": [fmt(u) for u in f.u_values],
        "table_case": f.table_case,
        "incompressibility": f.incompressibility,
        "paths": [format_path(p) for p in f.system.paths],
        "ebar": fmt(f.report.ebar),
    }
    row.update(_surface_fields(f.report))
    return row


def toroidal_payload(K: KnotParams, exclusions, u_floor=1, max_length=DEFAULT_MAX_LENGTH) -> list:
    return [finding_record(f) for f in find_toroidal(K, exclusions, u_floor, max_length)]


def verify_payload(max_n: int, exclusions) -> list:
    return [
        {
            "case": r.case,
            "params": r.params,
            "knot": str(r.knot),
            "expected_delta": fmt(r.expected_delta),
            "expected_u": fmt(r.expected_u),
            "found_delta": None if r.found_delta is None else fmt(r.found_delta),
            "found_u": [fmt(u) for u in r.found_u],
            "status": r.status,
        }
        for r in verify_table(max_n, exclusions=exclusions)
    ]


def census_payload(max_den: int, query: str, exclusions, workers: int = 1) -> dict:
    result = census(max_den, exclusions, workers)
    out: dict = {"max_den": max_den, "query": query}
    if query == "nonintegral":
        out["rows"] = [{"knot": str(K), "delta": fmt(d)} for K, d in result.nonintegral()]
    elif query == "multi":
        out["rows"] = [
            {"knot": str(K), "deltas": [fmt(d) for d in ds]} for K, ds in result.multi()
        ]
    elif query == "boundary":
        out["rows"] = [
            {"boundary_count": k, "findings": v} for k, v in result.boundary_counts().items()
        ]
    else:
        out["rows"] = [
            dict(knot=str(K), **finding_record(f)) for K, fs in result.findings.items() for f in fs
        ]
    out["excluded"] = [str(K) for K in result.excluded]
    return out


def paths_payload(tokens, u_floor=1, max_length=DEFAULT_MAX_LENGTH) -> list:
    K = parse_knot(tokens)
    rows = []
    for i, t in enumerate(K.ts, 1):
        for sk in enumerate_skeletons(t, u_floor, max_length, vertical=Fraction(u_floor) <= 1):
            rows.append({"tangle": i, "start": fmt(t), "skeleton": [fmt(v) for v in sk]})
    return rows


# -- rendering ---------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(record: dict, rows_key: str, fmt_name: str) -> str:
    rows = record[rows_key]
    if fmt_name == "json":
        return json.dumps(record, indent=2, ensure_ascii=False)
    columns = list(rows[0]) if rows else []
    if fmt_name == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
        return buf.getvalue().rstrip("\n")
    lines = [f"{k}: {_cell(v)}" for k, v in record.items() if k != rows_key and k != "schema_version"]
    lines.append(f"{len(rows)} {rows_key}")
    for row in rows:
        lines.append("  " + "  ".join(f"{c}={_cell(row[c])}" for c in columns))
    return "\n".join(lines)


# -- argument handling -------------------------------------------------------

_NEGATIVE = re.compile(r"^-\d")


def _protect_negatives(argv):
    # "-1/2" would otherwise be taken for an option; a leading space keeps
    # it positional and the rational parser strips it again
    return [" " + a if _NEGATIVE.match(a) else a for a in argv]


def _rational(text):
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")

    knot_opts = argparse.ArgumentParser(add_help=False)
    knot_opts.add_argument("knot", nargs="+", help='e.g. "K(-1/2,1/3,1/7)" or -1/2 1/3 1/7')
    knot_opts.add_argument("--u-floor", type=_rational, default=Fraction(1))
    knot_opts.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH,
                           help="bound on the total number of full edges in a system")

    excl = argparse.ArgumentParser(add_help=False)
    excl.add_argument("--exclusions", metavar="FILE",
                      help="knots to skip as non-hyperbolic (default: bundled list)")

    parser = argparse.ArgumentParser(
        prog="montesinos-tori",
        description="Boundary slopes and toroidal surgeries of length-3 Montesinos knots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slopes", parents=[common, knot_opts], help="all candidate systems")
    p.add_argument("--mirror", action="store_true", help="report the mirror image")

    p = sub.add_parser("toroidal", parents=[common, knot_opts, excl], help="genus-one candidates")
    p.add_argument("--mirror", action="store_true", help="report the mirror image")

    p = sub.add_parser("verify", parents=[common, excl], help="check the classification table")
    p.add_argument("--max-n", type=int, default=8)

    p = sub.add_parser("census", parents=[common, excl], help="toroidal census by denominator")
    p.add_argument("--max-den", type=int, default=11)
    p.add_argument("--query", choices=("nonintegral", "multi", "boundary", "all"), default="all")
    p.add_argument("--workers", type=int, default=1)

    sub.add_parser("paths", parents=[common, knot_opts], help="skeletons of each tangle")
    return parser


def _exclusions(args):
    path = getattr(args, "exclusions", None)
    return DEFAULT_EXCLUSIONS if path is None else load_exclusions(path)


def run(args) -> tuple[dict, str, int]:
    """(record, key of its row list, exit code) for parsed arguments."""
    record: dict = {"schema_version": SCHEMA_VERSION, "command": args.command}
    code = EXIT_OK
    if args.command == "slopes":
        K, header = _resolve(args.knot, args.mirror)
        record.update(header)
        record["systems"] = slopes_payload(K, args.u_floor, args.max_length)
        return record, "systems", code
    if args.command == "toroidal":
        K, header = _resolve(args.knot, args.mirror)
        record.update(header)
        record["findings"] = toroidal_payload(K, _exclusions(args), args.u_floor, args.max_length)
        return record, "findings", code
    if args.command == "verify":
        if args.max_n < 1:
            raise ParseError("--max-n must be at least 1")
        rows = verify_payload(args.max_n, _exclusions(args))
        mismatches = sum(r["status"] == "mismatch" for r in rows)
        record.update(max_n=args.max_n, mismatches=mismatches, rows=rows)
        return record, "rows", EXIT_MISMATCH if mismatches else code
    if args.command == "census":
        if args.max_den < 2:
            raise ParseError("--max-den must be at least 2")
        record.update(census_payload(args.max_den, args.query, _exclusions(args),
                                     max(1, args.workers)))
        return record, "rows", code
    record["input"] = str(parse_knot(args.knot))
    record["skeletons"] = paths_payload(args.knot, args.u_floor, args.max_length)
    return record, "skeletons", code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_protect_negatives(argv))
    try:
        record, key, code = run(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotAKnotError as exc:
        print(f"error: not a knot: {exc}", file=sys.stderr)
        return EXIT_NOT_KNOT
    except ExcludedKnotError as exc:
        print(f"excluded: {exc} (non-hyperbolic; no toroidal surgeries are reported)",
              file=sys.stderr)
        return EXIT_EXCLUDED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(render(record, key, args.format))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
