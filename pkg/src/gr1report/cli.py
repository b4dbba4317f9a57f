"""gr1report command line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .report import (
    ANALYSIS_ORDER, BaselineResourceError, ReportConfig, ReportError,
    run_report,
)
from .syntax import SpecError
from .compiler import CompileError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gr1report",
        description="Run the specification-debugging analyses on a GR(1) "
                    "specification and write JSON and HTML reports.")
    p.add_argument("spec", help="specification file")
    p.add_argument("--html", metavar="PATH", help="HTML report path "
                   "(default: SPEC.report.html)")
    p.add_argument("--json", metavar="PATH", help="JSON report path "
                   "(default: SPEC.report.json)")
    p.add_argument("--analyses", metavar="LIST",
                   help="comma-separated subset of: " + ",".join(ANALYSIS_ORDER))
    p.add_argument("--semantics", choices=["strict", "nonstrict", "both"],
                   default="strict")
    p.add_argument("--robotics", action="store_true",
                   help="require every admissible initial output to be winning")
    p.add_argument("--max-k", type=int, default=16,
                   help="largest glitch budget tried by the resilience "
                        "analysis (default 16)")
    p.add_argument("--max-cubes", type=int, default=10)
    p.add_argument("--max-trace-steps", type=int, default=64)
    p.add_argument("--abstract-horizon", type=int, default=64)
    p.add_argument("--timeout", type=float, metavar="SECONDS",
                   help="per-analysis cooperative timeout")
    p.add_argument("--node-budget", type=int, metavar="N",
                   help="BDD node budget per analysis")
    p.add_argument("--dump-bdd", metavar="NAME.dot",
                   help="also dump the baseline winning-set BDD as DOT text")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # GR1REPORT_SEED is reserved; behavior is deterministic and the
    # variable is intentionally ignored.
    analyses = tuple(ANALYSIS_ORDER)
    if args.analyses:
        analyses = tuple(a.strip() for a in args.analyses.split(",") if a.strip())
    try:
        config = ReportConfig(
            analyses=analyses, semantics=args.semantics,
            robotics=args.robotics, max_k=args.max_k,
            max_cubes=args.max_cubes, max_trace_steps=args.max_trace_steps,
            abstract_horizon=args.abstract_horizon,
            node_budget=args.node_budget, timeout_seconds=args.timeout)
    except ReportError as exc:
        print(f"gr1report: {exc}", file=sys.stderr)
        return 1
    try:
        if args.dump_bdd:
            _dump_bdd(args.spec, args.dump_bdd, config)
        report = run_report(args.spec, config, json_path=args.json,
                            html_path=args.html)
    except BaselineResourceError as exc:
        print(f"gr1report: baseline realizability check exhausted "
              f"resources: {exc}", file=sys.stderr)
        return 2
    except (SpecError, CompileError, ReportError, OSError) as exc:
        print(f"gr1report: {exc}", file=sys.stderr)
        return 1
    verdict = report.baseline["realizable"]
    print(f"gr1report: {report.spec_name}: {verdict}; "
          f"{len(report.analyses)} analyses written")
    return 0


def _dump_bdd(spec_path: str, dot_path: str, config: ReportConfig):
    from .compiler import compile_to_boolean
    from .syntax import parse_spec
    from .game import build_game, solve_game

    text = Path(spec_path).read_text(encoding="utf-8")
    spec = compile_to_boolean(parse_spec(text))
    game = build_game(spec, robotics=config.robotics,
                      node_budget=config.node_budget)
    region = solve_game(game, record=False)
    Path(dot_path).write_text(game.mgr.to_dot(region.win, "winning_set"),
                              encoding="utf-8")


if __name__ == "__main__":
    sys.exit(main())
