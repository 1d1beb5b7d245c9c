"""Harness command line: run an emitted suite and write coverage feedback."""

from __future__ import annotations

import argparse
import sys

from harness.runner import RERUNS, SuiteError, run_suite, write_feedback


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="execute a suite and write the feedback file")
    p.add_argument("--suite", required=True, help="suite directory with manifest")
    p.add_argument("--fixture", required=True, help="fixture package name, e.g. fixtureml")
    p.add_argument("--out", required=True, help="feedback file to write")
    p.add_argument(
        "--reruns", type=int, default=RERUNS,
        help="reruns per test for flaky detection (default 5)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        report = run_suite(args.suite, args.fixture, reruns=args.reruns)
        write_feedback(report, args.out)
    except (SuiteError, ModuleNotFoundError) as exc:
        print(f"harness: {exc}", file=sys.stderr)
        return 1
    passed = len(report.by_status("pass"))
    failed = len(report.by_status("fail"))
    flaky = len(report.by_status("flaky"))
    syntax = len(report.by_status("syntax-error"))
    covered = len(report.coverage_union())
    print(
        f"ran {len(report.results)} tests: {passed} pass, {failed} fail, "
        f"{flaky} flaky, {syntax} syntax-error; "
        f"branch coverage {covered}/{report.total_branches}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
