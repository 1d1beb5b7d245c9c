"""Helpers for building emitted-style suite directories by hand."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

PASSING_TEST = """\
import fixtureml.cluster as module_0

def test_case():
    int_0 = 2
    var_0 = module_0.KMeans(int_0)
    list_0 = [[1.0, 2.0], [10.0, 2.0], [1.0, 4.0], [9.0, 3.0]]
    var_1 = var_0.fit(list_0)
    var_2 = var_0.predict(list_0)
    assert var_2 is not None
"""

FAILING_TEST = """\
import fixtureml.cluster as module_0

def test_case():
    str_0 = 'not a matrix'
    var_0 = module_0.KMeans(2)
    var_1 = var_0.fit(str_0)
    assert var_1 is not None
"""

SYNTAX_ERROR_TEST = """\
import fixtureml.cluster as module_0

def test_case(:
    var_0 = module_0.KMeans(2
"""

SCALER_TEST = """\
import fixtureml.preprocessing as module_0

def test_case():
    var_0 = module_0.StandardScaler()
    list_0 = [[0.5, 1.5], [2.5, 3.5]]
    var_1 = var_0.fit_transform(list_0)
    assert var_1 is not None
"""


def flaky_test(state_file: str) -> str:
    return (
        "import fixtureml.unstable as module_0\n"
        "\n"
        "def test_case():\n"
        f"    var_0 = module_0.alternating_outcome({str(state_file)!r})\n"
        "    assert var_0 is not None\n"
    )


def write_suite(suite_dir: Path, tests: dict[str, str]) -> Path:
    """Create a suite directory with a manifest mapping ids to files."""
    suite_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for test_id, source in sorted(tests.items()):
        name = f"test_fixture_{test_id}.py"
        (suite_dir / name).write_text(source)
        records.append({"id": test_id, "file": name})
    manifest = {
        "target_module": "fixtureml.cluster",
        "backend": "random",
        "seed": 0,
        "guided": True,
        "label": "random-guided",
        "tests": records,
    }
    (suite_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return suite_dir


@pytest.fixture()
def suite_factory(tmp_path):
    def build(tests: dict[str, str], name: str = "suite") -> Path:
        return write_suite(tmp_path / name, tests)

    return build
