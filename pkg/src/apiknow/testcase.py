"""Statement-level model of generated test cases.

A test case is an ordered list of statements over a typed variable pool:
constructor calls, method/function calls, literal assignments, and a final
not-none assertion. The model is renderer-independent; the emitter turns it
into source text and the manifest serializes it for the check stage.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

from .model import ValidationError

STATEMENT_KINDS = ("construct", "call", "assign-literal", "assert-not-none")


@dataclass(frozen=True)
class VarRef:
    """Reference to a variable defined earlier in the same test."""

    name: str


class _Omitted:
    """Marker for an optional argument deliberately left at its default."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OMITTED"


OMITTED = _Omitted()


@dataclass(frozen=True)
class Arg:
    """One argument: positional index or keyword name, plus its value."""

    binding: int | str
    value: object  # VarRef | OMITTED | plain literal value


@dataclass(frozen=True)
class Statement:
    kind: str
    target_var: str | None = None
    callee: str | None = None
    receiver_var: str | None = None
    args: tuple[Arg, ...] = ()
    literal: object = None

    def defined_var(self) -> str | None:
        if self.kind in ("construct", "call", "assign-literal"):
            return self.target_var
        return None

    def referenced_vars(self) -> list[str]:
        refs: list[str] = []
        if self.kind == "assert-not-none" and self.target_var:
            refs.append(self.target_var)
        if self.receiver_var:
            refs.append(self.receiver_var)
        for arg in self.args:
            if isinstance(arg.value, VarRef):
                refs.append(arg.value.name)
        return refs


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class

    id: str
    statements: tuple[Statement, ...]
    seed: int = 0
    backend: str = "random"

    def validate(self) -> None:
        defined: set[str] = set()
        for i, stmt in enumerate(self.statements):
            if stmt.kind not in STATEMENT_KINDS:
                raise ValidationError(f"test {self.id}: unknown statement kind {stmt.kind!r}")
            for ref in stmt.referenced_vars():
                if ref not in defined:
                    raise ValidationError(
                        f"test {self.id}: statement {i} references undefined variable {ref!r}"
                    )
            target = stmt.defined_var()
            if target:
                defined.add(target)

    def calls(self) -> list[Statement]:
        return [s for s in self.statements if s.kind in ("construct", "call")]


@dataclass(frozen=True)
class TestSuite:
    __test__ = False  # not a pytest class

    target_module: str
    backend: str
    seed: int
    guided: bool
    tests: tuple[TestCase, ...] = ()

    @property
    def label(self) -> str:
        return f"{self.backend}-{'guided' if self.guided else 'blind'}"

    def validate(self) -> None:
        seen: set[str] = set()
        prefix = self.target_module + "."
        for test in self.tests:
            test.validate()
            if test.id in seen:
                raise ValidationError(f"duplicate test id {test.id}")
            seen.add(test.id)
            if not any(s.callee and s.callee.startswith(prefix) for s in test.calls()):
                raise ValidationError(
                    f"test {test.id} never calls the target module {self.target_module}"
                )


def repair_sequence(test: TestCase) -> TestCase:
    """Drop statements with undefined references and restore define-before-use.

    A greedy stable topological pass: statements whose references are already
    satisfied are emitted in original order; unsatisfiable ones are dropped.
    Idempotent on valid tests.
    """
    remaining = list(test.statements)
    ordered: list[Statement] = []
    defined: set[str] = set()
    while remaining:
        progressed = False
        deferred: list[Statement] = []
        for stmt in remaining:
            if all(ref in defined for ref in stmt.referenced_vars()):
                ordered.append(stmt)
                target = stmt.defined_var()
                if target:
                    defined.add(target)
                progressed = True
            else:
                deferred.append(stmt)
        if not progressed:
            break
        remaining = deferred
    repaired = replace(test, statements=tuple(ordered))
    repaired.validate()
    return repaired


# ---------------------------------------------------------------------------
# value / statement serialization (manifest format)


def encode_value(value: object) -> object:
    """JSON-encodable form preserving container kinds."""
    if isinstance(value, list):
        return {"kind": "list", "items": [encode_value(v) for v in value]}
    if isinstance(value, tuple):
        return {"kind": "tuple", "items": [encode_value(v) for v in value]}
    if isinstance(value, set):
        return {"kind": "set", "items": sorted((encode_value(v) for v in value), key=repr)}
    if isinstance(value, dict):
        return {
            "kind": "dict",
            "entries": [[encode_value(k), encode_value(v)] for k, v in sorted(value.items(), key=lambda kv: repr(kv[0]))],
        }
    return {"scalar": value}


def decode_value(obj: object) -> object:
    if not isinstance(obj, dict):
        raise ValidationError(f"malformed encoded value: {obj!r}")
    if "scalar" in obj:
        return obj["scalar"]
    kind = obj.get("kind")
    if kind == "list":
        return [decode_value(v) for v in obj["items"]]
    if kind == "tuple":
        return tuple(decode_value(v) for v in obj["items"])
    if kind == "set":
        return {decode_value(v) for v in obj["items"]}
    if kind == "dict":
        return {decode_value(k): decode_value(v) for k, v in obj["entries"]}
    raise ValidationError(f"malformed encoded value: {obj!r}")


def _encode_arg(arg: Arg) -> dict:
    out: dict = {"binding": arg.binding}
    if isinstance(arg.value, VarRef):
        out["var"] = arg.value.name
    elif arg.value is OMITTED:
        out["omitted"] = True
    else:
        out["value"] = encode_value(arg.value)
    return out


def _decode_arg(obj: dict) -> Arg:
    if "var" in obj:
        return Arg(obj["binding"], VarRef(obj["var"]))
    if obj.get("omitted"):
        return Arg(obj["binding"], OMITTED)
    return Arg(obj["binding"], decode_value(obj["value"]))


def encode_statement(stmt: Statement) -> dict:
    out: dict = {"kind": stmt.kind}
    if stmt.target_var is not None:
        out["target"] = stmt.target_var
    if stmt.callee is not None:
        out["callee"] = stmt.callee
    if stmt.receiver_var is not None:
        out["receiver"] = stmt.receiver_var
    if stmt.args:
        out["args"] = [_encode_arg(a) for a in stmt.args]
    if stmt.kind == "assign-literal":
        out["literal"] = encode_value(stmt.literal)
    return out


def decode_statement(obj: dict) -> Statement:
    try:
        return Statement(
            kind=obj["kind"],
            target_var=obj.get("target"),
            callee=obj.get("callee"),
            receiver_var=obj.get("receiver"),
            args=tuple(_decode_arg(a) for a in obj.get("args", ())),
            literal=decode_value(obj["literal"]) if "literal" in obj else None,
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed statement record: {exc}") from exc


def encode_test(test: TestCase) -> dict:
    return {
        "id": test.id,
        "seed": test.seed,
        "backend": test.backend,
        "statements": [encode_statement(s) for s in test.statements],
    }


def decode_test(obj: dict) -> TestCase:
    try:
        return TestCase(
            id=obj["id"],
            statements=tuple(decode_statement(s) for s in obj["statements"]),
            seed=obj.get("seed", 0),
            backend=obj.get("backend", "random"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed test record: {exc}") from exc


def content_hash(statements: tuple[Statement, ...]) -> str:
    """Stable id for a statement list, independent of seed or backend."""
    payload = json.dumps([encode_statement(s) for s in statements], sort_keys=True)
    return "t" + hashlib.sha1(payload.encode("utf-8")).hexdigest()[:10]
