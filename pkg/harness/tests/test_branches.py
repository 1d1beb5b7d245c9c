"""Branch enumeration and arc-evidence mapping."""

from __future__ import annotations

import pytest

from harness.branches import (
    BranchLayoutError,
    covered_outcomes,
    enumerate_file,
    enumerate_package,
)


class TestEnumeratePackage:
    def test_fixture_has_at_least_forty_branches(self):
        outcomes = enumerate_package("fixtureml")
        assert len(outcomes) >= 40

    def test_ids_stable_across_calls(self):
        first = [o.branch_id for o in enumerate_package("fixtureml")]
        second = [o.branch_id for o in enumerate_package("fixtureml")]
        assert first == second

    def test_every_branch_point_has_both_outcomes(self):
        outcomes = enumerate_package("fixtureml")
        points: dict[str, set] = {}
        for o in outcomes:
            prefix, _, kind = o.branch_id.rpartition(":")
            points.setdefault(prefix, set()).add(kind)
        for prefix, kinds in points.items():
            assert kinds in ({"T", "F"}, {"ITER", "EXIT"}), prefix

    def test_unstable_module_excluded_from_measurement(self):
        outcomes = enumerate_package("fixtureml")
        assert not any("unstable" in o.branch_id for o in outcomes)


class TestEnumerateFile:
    def test_if_else_arcs(self, tmp_path):
        path = tmp_path / "mod.py"
        path.write_text(
            "def f(x):\n"      # 1
            "    if x > 0:\n"  # 2
            "        y = 1\n"  # 3
            "    else:\n"      # 4
            "        y = 2\n"  # 5
            "    return y\n"   # 6
        )
        outcomes = {o.branch_id: o.arc for o in enumerate_file(str(path), "pkg/mod.py")}
        assert outcomes == {"pkg/mod.py:2:T": (2, 3), "pkg/mod.py:2:F": (2, 5)}

    def test_elseless_if_uses_successor(self, tmp_path):
        path = tmp_path / "mod.py"
        path.write_text(
            "def f(x):\n"          # 1
            "    if x > 0:\n"      # 2
            "        raise ValueError\n"  # 3
            "    return x\n"       # 4
        )
        outcomes = {o.branch_id: o.arc for o in enumerate_file(str(path), "pkg/mod.py")}
        assert outcomes["pkg/mod.py:2:F"] == (2, 4)

    def test_loop_tail_if_falls_back_to_header(self, tmp_path):
        path = tmp_path / "mod.py"
        path.write_text(
            "def f(xs):\n"          # 1
            "    n = 0\n"           # 2
            "    for x in xs:\n"    # 3
            "        if x > 0:\n"   # 4
            "            n += 1\n"  # 5
            "    return n\n"        # 6
        )
        outcomes = {o.branch_id: o.arc for o in enumerate_file(str(path), "pkg/mod.py")}
        assert outcomes["pkg/mod.py:3:ITER"] == (3, 4)
        assert outcomes["pkg/mod.py:3:EXIT"] == (3, 6)
        assert outcomes["pkg/mod.py:4:T"] == (4, 5)
        assert outcomes["pkg/mod.py:4:F"] == (4, 3)

    def test_function_tail_branch_rejected(self, tmp_path):
        path = tmp_path / "mod.py"
        path.write_text(
            "def f(x):\n"
            "    if x > 0:\n"
            "        raise ValueError\n"
        )
        with pytest.raises(BranchLayoutError, match="end of a function"):
            enumerate_file(str(path), "pkg/mod.py")

    def test_break_rejected(self, tmp_path):
        path = tmp_path / "mod.py"
        path.write_text(
            "def f(xs):\n"
            "    for x in xs:\n"
            "        break\n"
            "    return 0\n"
        )
        with pytest.raises(BranchLayoutError, match="break"):
            enumerate_file(str(path), "pkg/mod.py")


class TestCoveredOutcomes:
    def test_only_witnessed_arcs_count(self, tmp_path):
        path = tmp_path / "mod.py"
        path.write_text(
            "def f(x):\n"
            "    if x > 0:\n"
            "        y = 1\n"
            "    else:\n"
            "        y = 2\n"
            "    return y\n"
        )
        outcomes = enumerate_file(str(path), "pkg/mod.py")
        covered = covered_outcomes(outcomes, {"pkg/mod.py": {(2, 3), (3, 6)}})
        assert covered == {"pkg/mod.py:2:T"}
