"""Batch command-line surface for the mining and generation pipeline.

Subcommands chain through files: mine-docs builds a knowledge base from a
doc corpus, mine-usage builds a patterns file from transactions, gen emits a
test suite for a target module, check classifies an emitted suite against
the knowledge base, and report renders the aggregate tables. All randomness
flows from --seed. Set APIKNOW_LOG to control log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import docmining, emitter, usagemining
from .feedback import read_feedback
from .generation import GenConfig, GenerationError, gen_random_suite
from .model import KnowledgeBaseError, PersistenceError, ValidationError, kb_load, kb_save
from .oracle import check_test, model_coverage
from .search import gen_search_suite
from .usagemining import PatternIndex

logger = logging.getLogger(__name__)

DEFAULT_MIN_SUPPORT = 2
DEFAULT_MIN_CONFIDENCE = 0.5
DEFAULT_BUDGET_SECONDS = 300.0


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one pipeline run."""

    docs_path: str | None = None
    transactions_path: str | None = None
    kb_path: str | None = None
    patterns_path: str | None = None
    out_path: str | None = None
    feedback_path: str | None = None
    min_support: int = DEFAULT_MIN_SUPPORT
    min_confidence: float = DEFAULT_MIN_CONFIDENCE
    gen: GenConfig = field(default_factory=lambda: GenConfig(budget_seconds=DEFAULT_BUDGET_SECONDS))
    report_format: str = "text"


def _setup_logging() -> None:
    level = os.environ.get("APIKNOW_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apiknow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine-docs", help="mine a knowledge base from a doc corpus")
    p.add_argument("--docs", required=True, help="doc corpus file (JSON lines)")
    p.add_argument("--out", required=True, help="knowledge base output file")

    p = sub.add_parser("mine-usage", help="mine usage patterns from transactions")
    p.add_argument("--transactions", required=True, help="transactions file")
    p.add_argument("--min-support", type=int, default=DEFAULT_MIN_SUPPORT)
    p.add_argument("--min-confidence", type=float, default=DEFAULT_MIN_CONFIDENCE)
    p.add_argument("--out", required=True, help="patterns output file")

    p = sub.add_parser("gen", help="generate a test suite for a target module")
    p.add_argument("--kb", required=True)
    p.add_argument("--patterns", required=True)
    p.add_argument("--target", required=True, help="target module id")
    p.add_argument("--backend", choices=("random", "search"), default="random")
    p.add_argument("--budget-seconds", type=float, default=DEFAULT_BUDGET_SECONDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output suite directory")
    p.add_argument("--feedback", help="coverage feedback file from the harness")

    p = sub.add_parser("check", help="classify an emitted suite against the knowledge base")
    p.add_argument("--kb", required=True)
    p.add_argument("--suite", required=True, help="suite directory with manifest")
    p.add_argument("--out", required=True, help="violation report output file")

    p = sub.add_parser("report", help="render check results, optionally with coverage")
    p.add_argument("--checks", required=True, help="check results file (may concatenate runs)")
    p.add_argument("--feedback", help="coverage feedback file from the harness")
    return parser


def _cmd_mine_docs(args: argparse.Namespace) -> int:
    records = docmining.read_doc_corpus(args.docs)
    framework = records[0].api_id.split(".")[0] if records else "unknown"
    kb = docmining.build_kb(records, framework=framework)
    kb_save(kb, args.out)
    print(f"mined {len(kb.entries)} APIs into {args.out}")
    return 0


def _cmd_mine_usage(args: argparse.Namespace) -> int:
    transactions = usagemining.read_transactions(args.transactions)
    rules = usagemining.mine_usage_patterns(
        transactions, args.min_support, Fraction(args.min_confidence).limit_denominator(10**9)
    )
    usagemining.write_patterns(rules, args.out)
    print(f"mined {len(rules)} usage rules from {len(transactions)} transactions into {args.out}")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    kb = kb_load(args.kb)
    patterns = PatternIndex(usagemining.read_patterns(args.patterns))
    config = GenConfig(
        budget_seconds=args.budget_seconds, seed=args.seed, backend=args.backend
    )
    feedback_rows = None
    if args.feedback:
        _total, feedback_rows = read_feedback(args.feedback)
        if args.backend != "search":
            logger.warning("--feedback only influences the search backend; ignoring")
    if args.backend == "search":
        suite = gen_search_suite(args.target, kb, patterns, config, feedback=feedback_rows)
    else:
        suite = gen_random_suite(args.target, kb, patterns, config)
    files = emitter.emit_suite(suite, args.out)
    print(f"emitted {len(suite.tests)} tests to {args.out} ({len(files)} files)")
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    kb = kb_load(args.kb)
    suite, _files = emitter.read_suite(args.suite)
    module_specs = kb.module_apis(suite.target_module)
    records: list[dict] = []
    invalid = 0
    all_violations = []
    for test in suite.tests:
        verdict, violations = check_test(test, kb)
        if verdict == "invalid":
            invalid += 1
        records.append({"record": "test", "test_id": test.id, "verdict": verdict})
        all_violations.extend(violations)
    proxy = model_coverage(suite, module_specs, kb, PatternIndex()).score
    total = len(suite.tests)
    summary = {
        "record": "summary",
        "label": suite.label,
        "backend": suite.backend,
        "seed": suite.seed,
        "guided": suite.guided,
        "target_module": suite.target_module,
        "tests": total,
        "valid": total - invalid,
        "invalid": invalid,
        "invalid_rate": (invalid / total) if total else 0.0,
        "proxy_score": proxy,
        "test_ids": sorted(t.id for t in suite.tests),
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(summary, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        for violation in all_violations:
            rec = {"record": "violation", **violation.to_json()}
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    rate = summary["invalid_rate"]
    print(f"checked {total} tests: {invalid} invalid (rate {rate:.3f}); report in {args.out}")
    return 0


def _read_checks(path: str) -> list[dict]:
    summaries: list[dict] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: malformed check record: {exc}") from exc
            if rec.get("record") == "summary":
                summaries.append(rec)
    return summaries


def render_report(
    summaries: list[dict],
    feedback: tuple[int | None, dict[str, frozenset]] | None = None,
    report_format: str = "text",
) -> str:
    """Per-configuration rows; the first row is the improvement baseline."""
    columns = ["config", "tests", "valid", "invalid", "invalid_rate", "proxy"]
    with_coverage = feedback is not None
    if with_coverage:
        columns += ["coverage", "improvement"]
    rows: list[list[str]] = []
    baseline_coverage: float | None = None
    for summary in summaries:
        row = [
            str(summary.get("label", "?")),
            str(summary.get("tests", 0)),
            str(summary.get("valid", 0)),
            str(summary.get("invalid", 0)),
            f"{summary.get('invalid_rate', 0.0):.3f}",
            f"{summary.get('proxy_score', 0.0):.3f}",
        ]
        if with_coverage:
            total, by_test = feedback
            covered: set = set()
            for test_id in summary.get("test_ids", ()):
                covered |= by_test.get(test_id, frozenset())
            coverage = (len(covered) / total) if total else float(len(covered))
            row.append(f"{coverage:.3f}" if total else str(len(covered)))
            if baseline_coverage is None:
                baseline_coverage = coverage
                row.append("-")
            elif baseline_coverage > 0:
                row.append(f"{(coverage - baseline_coverage) / baseline_coverage * 100.0:+.1f}%")
            else:
                row.append("n/a")
        rows.append(row)
    if report_format == "structured":
        return json.dumps({"columns": columns, "rows": rows}, indent=2, sort_keys=True) + "\n"
    widths = [max(len(col), *(len(r[i]) for r in rows)) if rows else len(col) for i, col in enumerate(columns)]
    lines = ["  ".join(col.ljust(widths[i]) for i, col in enumerate(columns)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _cmd_report(args: argparse.Namespace) -> int:
    summaries = _read_checks(args.checks)
    feedback = read_feedback(args.feedback) if args.feedback else None
    sys.stdout.write(render_report(summaries, feedback))
    return 0


_COMMANDS = {
    "mine-docs": _cmd_mine_docs,
    "mine-usage": _cmd_mine_usage,
    "gen": _cmd_gen,
    "check": _cmd_check,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"apiknow: missing input file: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, PersistenceError) as exc:
        print(f"apiknow: {exc}", file=sys.stderr)
        return 1
    except (GenerationError, KnowledgeBaseError, emitter.EmitError, ValueError) as exc:
        print(f"apiknow: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
