"""Command-line surface: analyze, verify-catalog, example.

Exit codes: 0 all verified, 2 some hypothesis_not_satisfied (none failed),
3 counterexample found, 1 error.
"""

from __future__ import annotations

import argparse
import sys

from .catalog import GroupFile, load_catalog
from .engine import build_a6_example, entry_records, scan_catalog
from .errors import SylsplitError
from .perm import format_cycles
from .report import ScanSummary, emit_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="sylsplit",
        description=(
            "Verify the splitting Z(S) = W_G(S) x ker(tr) across catalogs "
            "of permutation groups."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[], help="analyze one group file")
    analyze.add_argument("file", help="JSON group file")
    analyze.add_argument("--prime", type=int, required=True)
    analyze.add_argument("--mode", choices=("wgs", "zf", "all"), default="wgs")
    analyze.add_argument("--format", choices=("json", "md"), default="json")

    verify = sub.add_parser("verify-catalog", help="scan a catalog directory")
    verify.add_argument("path", help="group file or directory of group files")
    verify.add_argument(
        "--primes",
        default="all",
        help='"all" or a comma-separated list, e.g. 2,3',
    )
    verify.add_argument("--mode", choices=("wgs", "zf", "all"), default="all")
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--format", choices=("json", "md"), default="json")

    example = sub.add_parser("example", help="reproduce a golden example")
    example.add_argument("which", choices=("a6",))
    example.add_argument("--format", choices=("json", "md"), default="json")
    return parser


def _exit_code(records) -> int:
    summary = ScanSummary.of(records)
    if summary.error:
        return 1
    if summary.counterexample:
        return 3
    if summary.hypothesis_not_satisfied:
        return 2
    return 0


def _parse_primes(spec: str):
    if spec == "all":
        return "all"
    try:
        primes = [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise SylsplitError(f"bad --primes value {spec!r}")
    if not primes:
        raise SylsplitError(f"bad --primes value {spec!r}")
    return primes


def run_cli(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            entries = load_catalog(args.file)
            records = []
            for gf in entries:
                if gf.group().order % args.prime:
                    continue
                records.extend(entry_records(gf, args.prime, args.mode))
            sys.stdout.write(emit_report(records, args.format))
            return _exit_code(records)

        if args.command == "verify-catalog":
            entries = load_catalog(args.path)
            records = scan_catalog(
                entries,
                primes=_parse_primes(args.primes),
                mode=args.mode,
                jobs=args.jobs,
            )
            sys.stdout.write(emit_report(records, args.format))
            return _exit_code(records)

        if args.command == "example":
            G, _S, _report = build_a6_example()
            gf = GroupFile(
                name="a6-c4-example",
                degree=G.degree,
                generators=tuple(format_cycles(g) for g in G.generators),
                tags=("counterexample",),
            )
            records = entry_records(gf, 2, "all")
            sys.stdout.write(emit_report(records, args.format))
            return _exit_code(records)
    except SylsplitError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    raise AssertionError("unreachable")


def main() -> None:
    raise SystemExit(run_cli())
