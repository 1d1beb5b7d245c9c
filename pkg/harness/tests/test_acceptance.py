"""Acceptance suite for the execution harness.

Drives the generator strictly through its command-line and file interfaces:
doc records and transactions go in, emitted suite directories come out, and
the harness measures real branch coverage over the fixture library.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

import fixtureml
from harness.runner import filter_flaky, run_suite, write_feedback

from conftest import PASSING_TEST, SCALER_TEST, SYNTAX_ERROR_TEST, flaky_test, write_suite

DOCS_DIR = os.path.join(os.path.dirname(fixtureml.__file__), "docs")
RECORDS = os.path.join(DOCS_DIR, "records.jsonl")
TRANSACTIONS = os.path.join(DOCS_DIR, "transactions.tsv")


def apiknow(*args: str) -> str:
    proc = subprocess.run(
        [sys.executable, "-m", "apiknow.cli", *args], capture_output=True, text=True
    )
    assert proc.returncode == 0, f"apiknow {' '.join(args)} failed: {proc.stderr}"
    return proc.stdout


def blind_corpus(path: str) -> None:
    """Signatures only: the knowledge available to an unguided generator."""
    with open(RECORDS, encoding="utf-8") as src, open(path, "w", encoding="utf-8") as dst:
        for line in src:
            record = json.loads(line)
            dst.write(json.dumps({"api_id": record["api_id"], "signature": record["signature"]}) + "\n")


@pytest.fixture(scope="module")
def mined(tmp_path_factory):
    root = tmp_path_factory.mktemp("mined")
    kb = root / "kb.json"
    kb_blind = root / "kb_blind.json"
    patterns = root / "patterns.jsonl"
    empty_patterns = root / "patterns_empty.jsonl"
    blind_docs = root / "blind_docs.jsonl"
    blind_corpus(str(blind_docs))
    empty_patterns.write_text("")
    apiknow("mine-docs", "--docs", RECORDS, "--out", str(kb))
    apiknow("mine-docs", "--docs", str(blind_docs), "--out", str(kb_blind))
    apiknow("mine-usage", "--transactions", TRANSACTIONS, "--out", str(patterns))
    return {
        "kb": str(kb),
        "kb_blind": str(kb_blind),
        "patterns": str(patterns),
        "empty_patterns": str(empty_patterns),
    }


def generate_and_measure(kb: str, patterns: str, seed: int, out_dir: str) -> tuple[int, int]:
    apiknow(
        "gen", "--kb", kb, "--patterns", patterns,
        "--target", "fixtureml.cluster", "--backend", "search",
        "--budget-seconds", "60", "--seed", str(seed), "--out", out_dir,
    )
    report = run_suite(out_dir, "fixtureml", reruns=1)
    return len(report.coverage_union()), report.total_branches


def test_coverage_improvement_over_knowledge_blind_baseline(mined, tmp_path):
    """Guided search beats the blind baseline on >= 4/5 paired seeds."""
    wins = 0
    improvements = []
    rows = []
    for seed in range(1, 6):
        guided, total = generate_and_measure(
            mined["kb"], mined["patterns"], seed, str(tmp_path / f"guided_{seed}")
        )
        blind, _ = generate_and_measure(
            mined["kb_blind"], mined["empty_patterns"], seed, str(tmp_path / f"blind_{seed}")
        )
        rows.append((seed, guided, blind, total))
        if guided >= blind:
            wins += 1
        improvements.append((guided - blind) / max(blind, 1))
    assert total >= 40, "fixture must expose at least 40 branches"
    mean_improvement = sum(improvements) / len(improvements)
    for seed, guided, blind, total_branches in rows:
        print(
            f"ACCEPTANCE coverage seed {seed}: guided {guided}/{total_branches} "
            f"vs blind {blind}/{total_branches}"
        )
    print(f"ACCEPTANCE coverage-improvement: mean relative improvement {mean_improvement:+.1%}")
    assert wins >= 4, f"guided won only {wins}/5 seeds: {rows}"
    assert mean_improvement > 0, f"mean improvement not positive: {rows}"


def test_syntax_error_and_flaky_tests_removed(tmp_path):
    """Both injected misbehaving tests are filtered; survivors pass 5 reruns."""
    state = tmp_path / "flaky_state"
    suite = write_suite(
        tmp_path / "suite",
        {
            "good_cluster": PASSING_TEST,
            "good_scaler": SCALER_TEST,
            "injected_syntax": SYNTAX_ERROR_TEST,
            "injected_flaky": flaky_test(str(state)),
        },
    )
    report = run_suite(str(suite), "fixtureml", reruns=5)
    by_id = {r.test_id: r.status for r in report.results}
    assert by_id["injected_syntax"] == "syntax-error"
    assert by_id["injected_flaky"] == "flaky"

    survivors = filter_flaky(str(suite), "fixtureml", reruns=5)
    assert sorted(survivors) == ["good_cluster", "good_scaler"]

    # all survivors pass five consecutive reruns
    from harness.branches import enumerate_package
    from harness.runner import run_test

    outcomes = enumerate_package("fixtureml")
    files = {r.test_id: r.file for r in report.results}
    for test_id in survivors:
        path = os.path.join(str(suite), files[test_id])
        statuses = {run_test(path, "fixtureml", outcomes)[0] for _ in range(5)}
        assert statuses == {"pass"}, f"{test_id} did not pass 5 consecutive reruns"

    feedback = tmp_path / "feedback.tsv"
    write_feedback(report, str(feedback))
    lines = feedback.read_text().splitlines()
    listed = {line.split("\t")[0] for line in lines[1:]}
    assert "injected_syntax" not in listed
    assert "injected_flaky" not in listed
    print("ACCEPTANCE flaky-and-syntax-filtering: PASS")
