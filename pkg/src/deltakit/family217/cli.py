"""Command line entry point ``deltakit``.

Exit codes: 0 success, 1 computational error, 2 regression mismatch or an
uncertified verdict, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..invariants import IncompleteProfiles
from .catalog import builtin_catalog
from .regression import regression_check
from .report import ScenarioRunError, report_to_json, report_to_text, run_report
from .schema import ScenarioError, dump_scenario, load_scenario

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_MISMATCH = 2
EXIT_INPUT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltakit",
        description="Exact Zariski sweeps and flag S-invariants for the family-217 threefold.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the built-in regression")
    check.add_argument("--jobs", type=int, default=1, help="scenarios to run concurrently")

    sub.add_parser("list", help="list the built-in scenarios")

    compute = sub.add_parser("compute", help="compute one scenario file or built-in scenario")
    src = compute.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", type=Path, help="path to a scenario JSON file")
    src.add_argument("--builtin", help="name of a built-in scenario")
    compute.add_argument("--format", choices=("text", "json"), default="text")
    compute.add_argument("--emit-chambers", action="store_true", help="include chamber tables")

    export = sub.add_parser("export", help="write the built-in scenarios as JSON files")
    export.add_argument("directory", type=Path)
    return parser


def _cmd_check(args) -> int:
    summary = regression_check(jobs=max(1, args.jobs))
    print("\n".join(summary.lines()))
    if summary.errors:
        return EXIT_COMPUTE
    return EXIT_OK if summary.passed else EXIT_MISMATCH


def _cmd_list(args) -> int:
    for s in builtin_catalog():
        print(f"{s.name:<22} flag={s.flag_kind:<5} ray=-K-u*{s.ray[1]:<4} expected={len(s.expected)}")
    return EXIT_OK


def _cmd_compute(args) -> int:
    try:
        if args.scenario is not None:
            scenario = load_scenario(args.scenario)
        else:
            scenario = next((s for s in builtin_catalog() if s.name == args.builtin), None)
            if scenario is None:
                print(f"error: no built-in scenario named {args.builtin!r}", file=sys.stderr)
                return EXIT_INPUT
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = run_report(scenario, emit_chambers=args.emit_chambers)
    except ScenarioRunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT if isinstance(exc.cause, IncompleteProfiles) else EXIT_COMPUTE
    sys.stdout.write(report_to_json(report) if args.format == "json" else report_to_text(report))
    return EXIT_OK if not report.mismatches else EXIT_MISMATCH


def _cmd_export(args) -> int:
    args.directory.mkdir(parents=True, exist_ok=True)
    for s in builtin_catalog():
        dump_scenario(s, args.directory / f"{s.name}.json")
    print(f"wrote {len(builtin_catalog())} scenarios to {args.directory}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": _cmd_check, "list": _cmd_list, "compute": _cmd_compute, "export": _cmd_export}
    return handler[args.command](args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
