"""Suite execution, flaky filtering, and feedback-file output.

Tests run sequentially, each in its own interpreter process, so state never
leaks between them. A test is flaky when its pass/fail outcome diverges
across five reruns; rerun rounds repeat until a full round removes nobody.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field

from harness.branches import BranchOutcome, covered_outcomes, enumerate_package

RERUNS = 5


class SuiteError(Exception):
    """Raised when a suite directory or fixture cannot be used."""


@dataclass(frozen=True)
class TestResult:
    test_id: str
    file: str
    status: str  # pass | fail | syntax-error | flaky
    covered: frozenset
    wall_time: float
    error: str = ""


@dataclass
class ExecutionReport:
    fixture: str
    total_branches: int
    results: list = field(default_factory=list)

    def by_status(self, status: str) -> list:
        return [r for r in self.results if r.status == status]

    def coverage_union(self) -> frozenset:
        covered: set = set()
        for result in self.results:
            if result.status in ("pass", "fail"):
                covered |= result.covered
        return frozenset(covered)


def read_manifest(suite_dir: str) -> list[dict]:
    """Test records from the emitted suite manifest (documented schema)."""
    path = os.path.join(suite_dir, "manifest.json")
    if not os.path.exists(path):
        raise SuiteError(f"missing suite manifest: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SuiteError(f"malformed suite manifest {path}: {exc}") from exc
    tests = manifest.get("tests")
    if not isinstance(tests, list):
        raise SuiteError(f"suite manifest {path} lacks a tests list")
    for record in tests:
        if "id" not in record or "file" not in record:
            raise SuiteError(f"suite manifest {path} has a test without id/file")
    return tests


def _execute(test_path: str, fixture: str) -> dict:
    with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as tmp:
        out_path = tmp.name
    try:
        proc = subprocess.run(
            [sys.executable, "-m", "harness.tracer", test_path, fixture, out_path],
            capture_output=True,
            text=True,
            timeout=60,
        )
        if proc.returncode != 0:
            return {"status": "fail", "arcs": {}, "error": proc.stderr.strip() or "tracer failed"}
        with open(out_path, encoding="utf-8") as fh:
            return json.load(fh)
    finally:
        os.unlink(out_path)


def _arcs_to_sets(arcs: dict) -> dict[str, set]:
    return {path: {tuple(pair) for pair in pairs} for path, pairs in arcs.items()}


def run_test(
    test_path: str, fixture: str, outcomes: list[BranchOutcome]
) -> tuple[str, frozenset, str]:
    report = _execute(test_path, fixture)
    covered = covered_outcomes(outcomes, _arcs_to_sets(report.get("arcs", {})))
    return report["status"], frozenset(covered), report.get("error", "")


def run_suite(suite_dir: str, fixture: str, reruns: int = 1) -> ExecutionReport:
    """Execute every suite test in isolation and record status + coverage.

    With reruns > 1, non-syntax tests whose pass/fail outcome diverges are
    marked flaky; flaky and syntax-error tests contribute no coverage.
    """
    outcomes = enumerate_package(fixture)
    tests = read_manifest(suite_dir)
    report = ExecutionReport(fixture=fixture, total_branches=len(outcomes))
    for record in tests:
        test_path = os.path.join(suite_dir, record["file"])
        if not os.path.exists(test_path):
            raise SuiteError(f"suite file missing: {test_path}")
        start = time.perf_counter()
        status, covered, error = run_test(test_path, fixture, outcomes)
        if status != "syntax-error" and reruns > 1:
            seen = {status}
            for _ in range(reruns - 1):
                again, more, _err = run_test(test_path, fixture, outcomes)
                seen.add(again)
                covered |= more
            if len(seen) > 1:
                status = "flaky"
        wall = time.perf_counter() - start
        if status in ("syntax-error", "flaky"):
            covered = frozenset()
        report.results.append(
            TestResult(record["id"], record["file"], status, covered, wall, error)
        )
    return report


def filter_flaky(suite_dir: str, fixture: str, reruns: int = RERUNS) -> list[str]:
    """Ids of tests whose outcome agrees across ``reruns`` executions.

    Divergent tests are removed and the whole pass repeats until a round
    removes nobody, mirroring rerun-until-stable filtering.
    """
    outcomes = enumerate_package(fixture)
    tests = read_manifest(suite_dir)
    survivors = [
        record
        for record in tests
        if run_test(os.path.join(suite_dir, record["file"]), fixture, outcomes)[0]
        != "syntax-error"
    ]
    while True:
        stable: list[dict] = []
        removed = 0
        for record in survivors:
            path = os.path.join(suite_dir, record["file"])
            seen = {run_test(path, fixture, outcomes)[0] for _ in range(reruns)}
            if len(seen) == 1:
                stable.append(record)
            else:
                removed += 1
        survivors = stable
        if removed == 0:
            return [record["id"] for record in survivors]


def write_feedback(report: ExecutionReport, path: str) -> None:
    """Write the coverage feedback file, bit-exact to the documented format.

    Header line carries the fixture's total branch count; one line per
    non-syntax, non-flaky test with its sorted covered branch ids.
    """
    rows = {
        result.test_id: result.covered
        for result in report.results
        if result.status in ("pass", "fail")
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#total-branches:{report.total_branches}\n")
        for test_id in sorted(rows):
            fh.write(f"{test_id}\t{','.join(sorted(rows[test_id]))}\n")
