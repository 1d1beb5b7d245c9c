"""Flaky detection by repeated execution."""

from __future__ import annotations

from harness.runner import filter_flaky, run_suite

from conftest import FAILING_TEST, PASSING_TEST, flaky_test


class TestFilterFlaky:
    def test_deterministic_suite_unchanged(self, suite_factory):
        suite = suite_factory({"good": PASSING_TEST, "bad": FAILING_TEST})
        survivors = filter_flaky(str(suite), "fixtureml", reruns=3)
        assert sorted(survivors) == ["bad", "good"]

    def test_injected_flaky_test_removed(self, suite_factory, tmp_path):
        state = tmp_path / "flaky_state"
        suite = suite_factory({
            "good": PASSING_TEST,
            "wobbly": flaky_test(str(state)),
        })
        survivors = filter_flaky(str(suite), "fixtureml", reruns=4)
        assert survivors == ["good"]

    def test_all_flaky_suite_empties(self, suite_factory, tmp_path):
        suite = suite_factory({
            "wobbly1": flaky_test(str(tmp_path / "s1")),
            "wobbly2": flaky_test(str(tmp_path / "s2")),
        })
        survivors = filter_flaky(str(suite), "fixtureml", reruns=4)
        assert survivors == []


class TestRunSuiteReruns:
    def test_flaky_status_detected_with_reruns(self, suite_factory, tmp_path):
        state = tmp_path / "flaky_state"
        suite = suite_factory({"wobbly": flaky_test(str(state))})
        report = run_suite(str(suite), "fixtureml", reruns=4)
        assert report.results[0].status == "flaky"
        assert report.results[0].covered == frozenset()

    def test_stable_test_not_marked_flaky(self, suite_factory):
        suite = suite_factory({"good": PASSING_TEST})
        report = run_suite(str(suite), "fixtureml", reruns=3)
        assert report.results[0].status == "pass"
