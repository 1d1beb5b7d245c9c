"""Rendering test cases to source files and the suite manifest."""

from __future__ import annotations

import ast
import json

import pytest

from apiknow.emitter import (
    EmitError,
    EmitStyle,
    MANIFEST_NAME,
    emit_suite,
    emit_test,
    read_suite,
    render_literal,
)
from apiknow.generation import GenConfig, gen_random_suite
from apiknow.testcase import Arg, OMITTED, Statement, TestCase, TestSuite, VarRef


def reference_style_test() -> TestCase:
    statements = (
        Statement("assign-literal", target_var="int_0", literal=19),
        Statement("construct", target_var="var_0", callee="k_means.KMeans", args=(Arg(0, VarRef("int_0")),)),
        Statement("assign-literal", target_var="float_0", literal=1.6484),
        Statement("assign-literal", target_var="int_2", literal=69672),
        Statement(
            "assign-literal",
            target_var="list_0",
            literal=[[1.6484, 69672], [83.14, 5568]],
        ),
        Statement(
            "call",
            target_var="var_1",
            callee="_split.train_test_split",
            args=(Arg(0, VarRef("list_0")),),
        ),
        Statement("call", target_var="var_2", callee="k_means.KMeans.fit", receiver_var="var_0", args=(Arg(0, VarRef("list_0")),)),
        Statement("call", target_var="var_3", callee="k_means.KMeans.predict", receiver_var="var_0", args=(Arg(0, VarRef("list_0")),)),
        Statement("assert-not-none", target_var="var_3"),
    )
    return TestCase("t_fig", statements)


class TestEmitTest:
    def test_reference_shape(self):
        source = emit_test(reference_style_test())
        lines = source.splitlines()
        assert lines[0] == "import k_means as module_0"
        assert lines[1] == "import _split as module_1"
        assert lines[2] == ""
        assert lines[3] == "def test_case():"
        assert "    int_0 = 19" in lines
        assert "    var_0 = module_0.KMeans(int_0)" in lines
        assert "    var_1 = module_1.train_test_split(list_0)" in lines
        assert "    var_2 = var_0.fit(list_0)" in lines
        assert "    var_3 = var_0.predict(list_0)" in lines
        assert lines[-1] == "    assert var_3 is not None"

    def test_emitted_source_parses(self):
        ast.parse(emit_test(reference_style_test()))

    def test_empty_statement_list_is_an_error(self):
        with pytest.raises(EmitError):
            emit_test(TestCase("t_empty", ()))

    def test_byte_determinism(self):
        test = reference_style_test()
        assert emit_test(test) == emit_test(test)

    def test_keyword_and_omitted_args(self):
        statements = (
            Statement("assign-literal", target_var="int_0", literal=3),
            Statement(
                "construct",
                target_var="var_0",
                callee="m.C",
                args=(Arg("n", VarRef("int_0")), Arg("skip", OMITTED)),
            ),
            Statement("assert-not-none", target_var="var_0"),
        )
        source = emit_test(TestCase("t_kw", statements))
        assert "var_0 = module_0.C(n=int_0)" in source
        assert "skip" not in source

    def test_float_shortest_round_trip(self):
        assert render_literal(1.6484) == "1.6484"
        assert render_literal(0.1) == "0.1"
        assert float(render_literal(2.0 / 3.0)) == 2.0 / 3.0

    def test_spelling_table(self):
        assert render_literal(None) == "None"
        assert render_literal(True) == "True"
        assert render_literal(False) == "False"
        assert render_literal((1,)) == "(1,)"
        assert render_literal(set()) == "set()"
        assert render_literal({"b": 1, "a": 2}) == "{'a': 2, 'b': 1}"

    def test_custom_spellings(self):
        style = EmitStyle(none_spelling="NULL")
        assert render_literal(None, style) == "NULL"


class TestEmitSuite:
    def make_suite(self):
        return TestSuite("k_means", "random", 3, True, (reference_style_test(),))

    def test_files_plus_manifest(self, tmp_path):
        files = emit_suite(self.make_suite(), str(tmp_path))
        names = sorted(p.name for p in tmp_path.iterdir())
        assert MANIFEST_NAME in names
        assert "test_k_means_t_fig.py" in names
        assert len(files) == 2

    def test_empty_suite_manifest_only(self, tmp_path):
        suite = TestSuite("k_means", "random", 0, True, ())
        files = emit_suite(suite, str(tmp_path))
        assert [p.name for p in tmp_path.iterdir()] == [MANIFEST_NAME]
        assert len(files) == 1

    def test_reemit_identical_bytes(self, tmp_path):
        emit_suite(self.make_suite(), str(tmp_path))
        first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
        emit_suite(self.make_suite(), str(tmp_path))
        second = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
        assert first == second

    def test_manifest_round_trip(self, tmp_path):
        suite = self.make_suite()
        emit_suite(suite, str(tmp_path))
        loaded, files = read_suite(str(tmp_path))
        assert loaded == suite
        assert files == {"t_fig": "test_k_means_t_fig.py"}

    def test_manifest_maps_ids_to_files(self, tmp_path):
        emit_suite(self.make_suite(), str(tmp_path))
        manifest = json.loads((tmp_path / MANIFEST_NAME).read_text())
        assert manifest["tests"][0]["id"] == "t_fig"
        assert manifest["tests"][0]["file"] == "test_k_means_t_fig.py"

    def test_missing_manifest_is_an_error(self, tmp_path):
        from apiknow.model import ValidationError

        with pytest.raises(ValidationError, match="manifest"):
            read_suite(str(tmp_path))

    def test_generated_suites_emit_parseable_files(self, tmp_path, fixture_kb, fixture_patterns):
        suite = gen_random_suite(
            "kmlib.cluster", fixture_kb, fixture_patterns, GenConfig(budget_seconds=0.5, seed=8)
        )
        emit_suite(suite, str(tmp_path))
        for path in tmp_path.glob("*.py"):
            ast.parse(path.read_text())
