"""Renders test cases to deterministic Python test source files.

Each test becomes one file holding a zero-argument test function: module
imports first (aliased module_0, module_1, ... in first-use order), one
statement per line, and a final not-none assertion. A suite manifest maps
test ids to files and embeds the statement model so the check stage can
reconstruct tests without parsing source.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .model import ValidationError
from .testcase import (
    OMITTED,
    Statement,
    TestCase,
    TestSuite,
    VarRef,
    decode_test,
    encode_test,
)


class EmitError(Exception):
    """Raised when a test cannot be rendered."""


_PREFIXES = {
    int: "int_",
    float: "float_",
    str: "str_",
    bool: "bool_",
    list: "list_",
    tuple: "tuple_",
    set: "set_",
    dict: "dict_",
}


class VarNamer:
    """Allocates typed variable names (int_0, list_1, var_2) within one test."""

    def __init__(self) -> None:
        self._counters: dict[str, int] = {}
        self._taken: set[str] = set()

    def reserve(self, name: str) -> None:
        """Mark an existing name as taken so fresh names never collide."""
        self._taken.add(name)

    def fresh(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0)
        while f"{prefix}{n}" in self._taken:
            n += 1
        self._counters[prefix] = n + 1
        name = f"{prefix}{n}"
        self._taken.add(name)
        return name

    def fresh_for(self, value: object, result: bool = False) -> str:
        if result or value is None:
            return self.fresh("var_")
        prefix = "var_"
        for cls, p in _PREFIXES.items():
            if type(value) is cls:
                prefix = p
                break
        return self.fresh(prefix)


@dataclass(frozen=True)
class EmitStyle:
    module_alias_prefix: str = "module_"
    test_function_name: str = "test_case"
    indent: str = "    "
    assertion_template: str = "assert {var} is not None"
    none_spelling: str = "None"
    true_spelling: str = "True"
    false_spelling: str = "False"
    file_name_template: str = "test_{module}_{id}.py"


DEFAULT_STYLE = EmitStyle()

MANIFEST_NAME = "manifest.json"


def render_literal(value: object, style: EmitStyle = DEFAULT_STYLE) -> str:
    """Canonical source spelling; floats use the shortest round-trip form."""
    if value is None:
        return style.none_spelling
    if value is True:
        return style.true_spelling
    if value is False:
        return style.false_spelling
    if isinstance(value, (int, float, str)):
        return repr(value)
    if isinstance(value, list):
        return "[" + ", ".join(render_literal(v, style) for v in value) + "]"
    if isinstance(value, tuple):
        inner = ", ".join(render_literal(v, style) for v in value)
        return f"({inner},)" if len(value) == 1 else f"({inner})"
    if isinstance(value, set):
        if not value:
            return "set()"
        items = sorted((render_literal(v, style) for v in value))
        return "{" + ", ".join(items) + "}"
    if isinstance(value, dict):
        items = sorted(
            f"{render_literal(k, style)}: {render_literal(v, style)}" for k, v in value.items()
        )
        return "{" + ", ".join(items) + "}"
    raise EmitError(f"unrenderable literal: {value!r}")


def _call_modules(test: TestCase) -> list[str]:
    """Modules that must be imported, in first-use order."""
    modules: list[str] = []
    for stmt in test.statements:
        if stmt.kind == "construct" or (stmt.kind == "call" and stmt.receiver_var is None):
            module = stmt.callee.rsplit(".", 1)[0] if "." in stmt.callee else ""
            if module and module not in modules:
                modules.append(module)
    return modules


def _render_args(stmt: Statement, style: EmitStyle) -> str:
    positional: list[tuple[int, str]] = []
    keywords: list[str] = []
    for arg in stmt.args:
        if arg.value is OMITTED:
            continue
        if isinstance(arg.value, VarRef):
            text = arg.value.name
        else:
            text = render_literal(arg.value, style)
        if isinstance(arg.binding, int):
            positional.append((arg.binding, text))
        else:
            keywords.append(f"{arg.binding}={text}")
    positional.sort(key=lambda item: item[0])
    return ", ".join([t for _, t in positional] + keywords)


def emit_test(test: TestCase, style: EmitStyle = DEFAULT_STYLE) -> str:
    """Render one test case to source text; deterministic per (test, style)."""
    if not test.statements:
        raise EmitError(f"test {test.id} has no statements")
    test.validate()
    modules = _call_modules(test)
    aliases = {m: f"{style.module_alias_prefix}{i}" for i, m in enumerate(modules)}
    lines = [f"import {m} as {aliases[m]}" for m in modules]
    if lines:
        lines.append("")
    lines.append(f"def {style.test_function_name}():")
    body: list[str] = []
    for stmt in test.statements:
        if stmt.kind == "assign-literal":
            body.append(f"{stmt.target_var} = {render_literal(stmt.literal, style)}")
        elif stmt.kind == "construct":
            module, name = stmt.callee.rsplit(".", 1)
            body.append(f"{stmt.target_var} = {aliases[module]}.{name}({_render_args(stmt, style)})")
        elif stmt.kind == "call":
            name = stmt.callee.rsplit(".", 1)[-1]
            if stmt.receiver_var is not None:
                receiver = stmt.receiver_var
            else:
                module = stmt.callee.rsplit(".", 1)[0]
                receiver = aliases[module]
            body.append(f"{stmt.target_var} = {receiver}.{name}({_render_args(stmt, style)})")
        elif stmt.kind == "assert-not-none":
            body.append(style.assertion_template.format(var=stmt.target_var))
        else:
            raise EmitError(f"unrenderable statement kind {stmt.kind!r}")
    if not body:
        raise EmitError(f"test {test.id} renders to an empty body")
    lines.extend(style.indent + b for b in body)
    source = "\n".join(lines) + "\n"
    try:
        compile(source, f"<{test.id}>", "exec")
    except SyntaxError as exc:  # pragma: no cover - guards emitter bugs
        raise EmitError(f"emitted source for {test.id} does not parse: {exc}") from exc
    return source


def _file_name(suite: TestSuite, test: TestCase, style: EmitStyle) -> str:
    module = suite.target_module.rsplit(".", 1)[-1] or "module"
    return style.file_name_template.format(module=module, id=test.id)


def emit_suite(
    suite: TestSuite, out_dir: str, style: EmitStyle = DEFAULT_STYLE
) -> list[str]:
    """Write one file per test plus the suite manifest; returns file paths.

    Re-emitting the same suite overwrites with identical bytes.
    """
    suite.validate()
    os.makedirs(out_dir, exist_ok=True)
    files: list[str] = []
    records = []
    for test in sorted(suite.tests, key=lambda t: t.id):
        name = _file_name(suite, test, style)
        path = os.path.join(out_dir, name)
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(emit_test(test, style))
        except OSError as exc:
            raise EmitError(f"cannot write {path}: {exc}") from exc
        files.append(path)
        record = encode_test(test)
        record["file"] = name
        records.append(record)
    manifest = {
        "target_module": suite.target_module,
        "backend": suite.backend,
        "seed": suite.seed,
        "guided": suite.guided,
        "label": suite.label,
        "tests": records,
    }
    manifest_path = os.path.join(out_dir, MANIFEST_NAME)
    try:
        with open(manifest_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    except OSError as exc:
        raise EmitError(f"cannot write {manifest_path}: {exc}") from exc
    return files + [manifest_path]


def read_suite(suite_dir: str) -> tuple[TestSuite, dict[str, str]]:
    """Load a suite from its manifest: (suite, test id -> file name)."""
    manifest_path = os.path.join(suite_dir, MANIFEST_NAME)
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"missing suite manifest: {manifest_path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed suite manifest {manifest_path}: {exc}") from exc
    try:
        tests = tuple(decode_test(rec) for rec in manifest["tests"])
        suite = TestSuite(
            target_module=manifest["target_module"],
            backend=manifest["backend"],
            seed=manifest["seed"],
            guided=manifest["guided"],
            tests=tests,
        )
        files = {rec["id"]: rec["file"] for rec in manifest["tests"]}
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed suite manifest {manifest_path}: {exc}") from exc
    suite.validate()
    return suite, files
