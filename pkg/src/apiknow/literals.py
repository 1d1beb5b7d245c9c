"""Tagged scalar literals and helpers for inspecting Python literal values.

Constraint records store defaults and allowed values as tagged scalars so
that e.g. the integer 0 and the boolean False stay distinct regardless of
how the host language compares them. The nesting/dtype walkers here are
shared by the documentation miner and the validity oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

LITERAL_TAGS = ("integer", "float", "string", "boolean", "none")

#: data-type vocabulary used by constraints
DATA_TYPES = ("integer", "float", "string", "boolean")

#: structure vocabulary used by constraints
STRUCTURES = (
    "array-like",
    "list",
    "tuple",
    "set",
    "dict",
    "sparse-matrix",
    "sequence",
    "scalar",
)

UNDEFINED = "undefined"


@dataclass(frozen=True)
class ScalarLiteral:
    """A scalar value tagged with its literal kind."""

    tag: str
    value: int | float | str | bool | None = None

    def __post_init__(self) -> None:
        if self.tag not in LITERAL_TAGS:
            raise ValueError(f"unknown literal tag {self.tag!r}")
        if self.tag == "none" and self.value is not None:
            raise ValueError("none-literal carries no value")

    def to_python(self) -> int | float | str | bool | None:
        return self.value

    def to_json(self) -> dict:
        return {"tag": self.tag, "value": self.value}

    @classmethod
    def from_json(cls, obj: dict) -> "ScalarLiteral":
        return cls(obj["tag"], obj.get("value"))

    @classmethod
    def from_python(cls, value: object) -> "ScalarLiteral":
        if value is None:
            return cls("none")
        if isinstance(value, bool):
            return cls("boolean", value)
        if isinstance(value, int):
            return cls("integer", value)
        if isinstance(value, float):
            return cls("float", value)
        if isinstance(value, str):
            return cls("string", value)
        raise ValueError(f"not a scalar literal: {value!r}")

    @classmethod
    def from_text(cls, token: str) -> "ScalarLiteral":
        """Parse a literal token as it appears in documentation text."""
        token = token.strip()
        if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
            return cls("string", token[1:-1])
        if token == "None":
            return cls("none")
        if token == "True":
            return cls("boolean", True)
        if token == "False":
            return cls("boolean", False)
        try:
            return cls("integer", int(token))
        except ValueError:
            pass
        try:
            return cls("float", float(token))
        except ValueError:
            pass
        return cls("string", token)

    def render(self) -> str:
        """Source-text spelling of the literal."""
        if self.tag == "none":
            return "None"
        return repr(self.value)


def scalar_tag(value: object) -> str | None:
    """Tag of a plain Python scalar, or None for containers."""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "float"
    if isinstance(value, str):
        return "string"
    return None


def nested_dims(value: object) -> tuple[int, ...] | None:
    """Rectangular dimensions of a nested list/tuple literal.

    Scalars have dims (). Ragged or mixed-depth nesting returns None.
    """
    if not isinstance(value, (list, tuple)):
        return ()
    if not value:
        return (0,)
    child = nested_dims(value[0])
    if child is None:
        return None
    for item in value[1:]:
        if nested_dims(item) != child:
            return None
    return (len(value),) + child


def leaf_values(value: object) -> list[object]:
    """All non-container leaves of a nested list/tuple, left to right."""
    if isinstance(value, (list, tuple)):
        out: list[object] = []
        for item in value:
            out.extend(leaf_values(item))
        return out
    return [value]


def leaf_dtype(value: object) -> str | None:
    """Common data type of all leaves, promoting integer+float to float.

    Returns None for empty containers or incompatible mixes.
    """
    tags = {scalar_tag(v) for v in leaf_values(value)}
    if None in tags or not tags:
        return None
    if len(tags) == 1:
        tag = tags.pop()
        return tag if tag in DATA_TYPES else None
    if tags == {"integer", "float"}:
        return "float"
    return None


def value_structure(value: object) -> str:
    """Structure category of a Python value, in the constraint vocabulary.

    Nested list literals are treated as array-like, matching how
    documentation example code uses them to stand in for arrays.
    """
    if isinstance(value, list):
        return "array-like"
    if isinstance(value, tuple):
        return "tuple"
    if isinstance(value, set):
        return "set"
    if isinstance(value, dict):
        return "dict"
    return "scalar"
