"""Command line entry point: ``cjkit eval|conditions|close|repro``.

Exit status: 0 when everything checked holds, 1 when a check or condition
fails (or closure is inconsistent), 2 on parse or model errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .closure import ClosureOptions
from .conditions import check_all
from .errors import CJError
from .fixtures import FIXTURES, repro
from .scenario import (Scenario, build_model, format_ob_listing, format_set,
                       parse_scenario, run_scenario)


def _load(path: str) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CJError(f"cannot read {path}: {e.strerror}") from None
    return parse_scenario(text)


def cmd_eval(args) -> int:
    report = run_scenario(_load(args.file))
    print(report.render(limit=args.limit))
    return 0 if report.ok else 1


def cmd_conditions(args) -> int:
    sc = _load(args.file)
    model, closure = build_model(sc)
    if model is None:
        print(closure.report.render(lambda m: format_set(sc.worlds, m)))
        return 1
    report = check_all(model, include5=args.cond5)
    print(report.render(model, limit=args.limit))
    return 0 if report.ok else 1


def cmd_close(args) -> int:
    sc = _load(args.file)
    opts = sc.options or ClosureOptions()
    opts = dataclasses.replace(opts, close4=opts.close4 or args.cond4,
                               close5=opts.close5 or args.cond5)
    sc = sc.with_options(opts)
    model, closure = build_model(sc)
    # keep stdout clean for the listing
    out = sys.stderr if args.print_ob else sys.stdout
    print(closure.report.render(lambda m: format_set(sc.worlds, m)), file=out)
    if model is None:
        return 1
    for v in closure.warnings[:args.limit]:
        print("warn " + v.describe(model), file=out)
    if len(closure.warnings) > args.limit:
        print(f"... {len(closure.warnings) - args.limit} more warnings", file=out)
    if args.print_ob:
        sys.stdout.write(format_ob_listing(model))
    return 0 if not closure.warnings else 1


def cmd_repro(args) -> int:
    names = list(FIXTURES) if args.name == "all" else [args.name]
    ok = True
    for name in names:
        report = repro(name)
        print(report.render())
        ok = ok and report.ok
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cjkit", description="Finite models of the deontic logic CJ.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="build the scenario's model and evaluate its checks")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=10, help="violations shown per group")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("conditions", help="check conditions (1)-(4) on the scenario's model")
    p.add_argument("file")
    p.add_argument("--cond5", action="store_true", help="also check condition (5)")
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("close", help="seed and close π")
    p.add_argument("file")
    p.add_argument("--cond4", action="store_true", help="also close under condition (4)")
    p.add_argument("--cond5", action="store_true", help="also close under condition (5)")
    p.add_argument("--print-ob", action="store_true", help="print the π listing to stdout")
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("repro", help="run a built-in fixture")
    p.add_argument("name", help=f"one of: {', '.join(FIXTURES)}, all")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CJError as e:
        print(f"cjkit: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
