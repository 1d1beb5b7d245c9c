"""Mines API constraints from normalized documentation records.

Three sources contribute to a knowledge base: the signature definition
(names, order, requiredness, defaults), the parametric page (one natural
language sentence per parameter, matched against 18 compiled linguistic
rules), and example code (concrete values observed for parameters of known
APIs). APIs that lack example code inherit example-derived fields from APIs
sharing an identical parameter page.
"""

from __future__ import annotations

import ast
import hashlib
import logging
import re
from dataclasses import dataclass, field, replace

from .literals import ScalarLiteral, leaf_dtype, nested_dims, value_structure
from .model import (
    ApiSpec,
    KbEntry,
    KnowledgeBase,
    ParamConstraint,
    ParamSpec,
    ShapeSpec,
    ValidationError,
    kb_merge,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# doc records


@dataclass(frozen=True)
class DocRecord:
    """Normalized documentation for one API."""

    api_id: str
    signature_text: str
    param_docs: dict = field(default_factory=dict)  # param name -> raw sentence
    example_code: str | None = None

    @property
    def parametric_page_fingerprint(self) -> str:
        return page_fingerprint(self.param_docs)


def page_fingerprint(param_docs: dict) -> str:
    """Hash of the whitespace-normalized concatenated parameter sentences."""
    joined = "\n".join(
        f"{name}: {normalize_sentence(param_docs[name])}" for name in sorted(param_docs)
    )
    return hashlib.sha1(joined.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# sentence normalization

_QUOTE_MAP = str.maketrans({
    "‘": "'", "’": "'", "‚": "'", "‛": "'", "`": "'", "´": "'",
    "“": '"', "”": '"', "„": '"',
    "–": "-", "—": "-", "−": "-",
    " ": " ", "…": " ",
})


def normalize_sentence(raw: str) -> str:
    """Collapse whitespace and noise characters, keeping rule-relevant syntax.

    Curly quotes become straight quotes, control characters vanish, runs of
    whitespace collapse to one space, and a trailing sentence period is
    dropped.
    """
    text = raw.translate(_QUOTE_MAP)
    text = "".join(ch for ch in text if ch >= " " or ch in "\t\n")
    text = re.sub(r"\s+", " ", text).strip()
    text = text.strip(";,: ")
    if text.endswith("."):
        text = text[:-1].rstrip()
    return text


# ---------------------------------------------------------------------------
# signature parsing

_SIGNATURE_RE = re.compile(r"^\s*(?:class\s+|def\s+)?(?P<name>[\w.]+)\s*\((?P<body>.*)\)\s*:?\s*$", re.S)


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside brackets and quotes."""
    parts: list[str] = []
    depth = 0
    quote: str | None = None
    current: list[str] = []
    for ch in text:
        if quote:
            current.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch in "'\"":
            quote = ch
            current.append(ch)
            continue
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _default_literal(text: str) -> ScalarLiteral:
    text = text.strip()
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return ScalarLiteral.from_text(text)
    try:
        return ScalarLiteral.from_python(value)
    except ValueError:
        # container default; keep its verbatim spelling
        return ScalarLiteral("string", text)


def parse_signature(signature_text: str) -> tuple[str, tuple[ParamSpec, ...]]:
    """Parse a signature definition into its name and ordered parameters.

    Parameters without ``=`` are required; those with a default are optional.
    ``*args``/``**kwargs`` become a single optional pseudo-parameter each.
    """
    if signature_text.count("(") != signature_text.count(")"):
        raise ValidationError(f"unbalanced parentheses in signature: {signature_text!r}")
    m = _SIGNATURE_RE.match(signature_text)
    if not m:
        raise ValidationError(f"cannot parse signature: {signature_text!r}")
    name = m.group("name").rsplit(".", 1)[-1]
    if not name:
        raise ValidationError("empty API name in signature")
    body = m.group("body").strip()
    params: list[ParamSpec] = []
    if body:
        for i, chunk in enumerate(_split_top_level(body)):
            chunk = chunk.strip()
            if not chunk:
                raise ValidationError(f"empty parameter at position {i} in {signature_text!r}")
            if chunk in ("/",):
                continue
            if "=" in chunk and not chunk.startswith("*"):
                pname, default = chunk.split("=", 1)
                params.append(
                    ParamSpec(pname.strip(), len(params), False, _default_literal(default))
                )
            elif chunk.startswith("*"):
                params.append(ParamSpec(chunk, len(params), False, None))
            else:
                params.append(ParamSpec(chunk, len(params), True, None))
    spec_like = ApiSpec(api_id=name, kind="free-function", params=tuple(params))
    spec_like.validate()
    return name, tuple(params)


# ---------------------------------------------------------------------------
# linguistic rules

_DTYPE_WORDS = {
    "int": "integer", "ints": "integer", "integer": "integer", "integers": "integer",
    "float": "float", "floats": "float",
    "str": "string", "strs": "string", "string": "string", "strings": "string",
    "bool": "boolean", "bools": "boolean", "boolean": "boolean", "booleans": "boolean",
}
_STRUCT_WORDS = {
    "array-like": "array-like", "array": "array-like", "arrays": "array-like",
    "list": "list", "lists": "list",
    "tuple": "tuple", "tuples": "tuple",
    "set": "set", "sets": "set",
    "dict": "dict", "dicts": "dict", "dictionary": "dict",
    "sparse matrix": "sparse-matrix", "sparse-matrix": "sparse-matrix", "matrix": "sparse-matrix",
    "sequence": "sequence", "sequences": "sequence",
}

_DTYPE_RX = r"(?:ints?|integers?|floats?|strs?|strings?|bools?|booleans?)"
_STRUCT_RX = r"(?:array-like|arrays?|lists?|tuples?|sets?|dicts?|dictionary|sparse[ -]matrix|matrix|sequences?)"
_VALUE_RX = r"(?:'[^']*'|\"[^\"]*\"|-?\d+\.\d+(?:[eE][-+]?\d+)?|-?\d+|None|True|False)"
_SHAPE_RX = r"\(\s*(?:[A-Za-z_]\w*|\d+)(?:\s*,\s*(?:[A-Za-z_]\w*|\d+))*\s*,?\s*\)"
_DEFAULT_RX = rf"(?:,?\s*default\s*=\s*(?P<default>{_VALUE_RX}))"


def _canon_dtype(token: str) -> str:
    return _DTYPE_WORDS[token.lower()]


def _canon_struct(token: str) -> str:
    return _STRUCT_WORDS[token.lower().replace("_", " ")]


def _parse_shape(token: str) -> ShapeSpec:
    inner = token.strip()[1:-1]
    dims: list[str | int] = []
    for piece in inner.split(","):
        piece = piece.strip()
        if not piece:
            continue
        dims.append(int(piece) if piece.isdigit() else piece)
    return ShapeSpec(tuple(dims))


def _parse_values(text: str) -> tuple[ScalarLiteral, ...]:
    return tuple(ScalarLiteral.from_text(tok) for tok in re.findall(_VALUE_RX, text))


def _parse_struct_list(text: str) -> list[str]:
    return [_canon_struct(tok) for tok in re.findall(_STRUCT_RX, text, re.I)]


@dataclass(frozen=True)
class LinguisticRule:
    """One compiled parametric-page rule."""

    rule_id: str
    pattern: re.Pattern
    yields: tuple[str, ...]
    extract: object  # match -> ParamConstraint
    literal_weight: int


def _page(fields: dict, optional_hint: bool = False) -> ParamConstraint:
    prov = {name: "parametric-page" for name in fields if not name.endswith("_alts")}
    if "structure_alts" in fields and "structure" not in fields:
        raise ValueError("alternatives without a primary value")
    constraint = ParamConstraint(provenance=prov, **fields)
    if optional_hint:
        constraint = replace(
            constraint,
            optional=True,
            provenance={**constraint.provenance, "optional": "parametric-page"},
        )
    return constraint


def _rule(rule_id: str, pattern: str, yields: tuple[str, ...], extract, weight: int) -> LinguisticRule:
    return LinguisticRule(rule_id, re.compile(pattern, re.I), yields, extract, weight)


def _build_rules() -> tuple[LinguisticRule, ...]:
    rules = [
        _rule(
            "R1",
            rf"(?P<d>{_DTYPE_RX})\s*,?\s*default\s*=\s*(?P<default>{_VALUE_RX})",
            ("data_type", "default_value"),
            lambda m: _page({
                "data_type": _canon_dtype(m.group("d")),
                "default_value": ScalarLiteral.from_text(m.group("default")),
            }),
            9,
        ),
        _rule(
            "R2",
            rf"(?P<d1>{_DTYPE_RX})\s+or\s+(?P<d2>{_DTYPE_RX})",
            ("data_type",),
            lambda m: _page({
                "data_type": _canon_dtype(m.group("d1")),
                "data_type_alts": tuple(
                    t for t in (_canon_dtype(m.group("d2")),) if t != _canon_dtype(m.group("d1"))
                ),
            }),
            4,
        ),
        _rule(
            "R3",
            rf"(?P<s>{_STRUCT_RX})\s+of\s+shape\s+(?P<shape>{_SHAPE_RX}){_DEFAULT_RX}?",
            ("structure", "shape", "default_value"),
            lambda m: _page({
                "structure": _canon_struct(m.group("s")),
                "shape": _parse_shape(m.group("shape")),
                **(
                    {"default_value": ScalarLiteral.from_text(m.group("default"))}
                    if m.group("default")
                    else {}
                ),
            }),
            20,
        ),
        _rule(
            "R4",
            rf"\{{\s*(?P<enum>{_STRUCT_RX}(?:\s*,\s*{_STRUCT_RX})+)\s*\}}\s+of\s+shape\s+(?P<shape>{_SHAPE_RX}){_DEFAULT_RX}?",
            ("structure", "shape", "default_value"),
            lambda m: _page({
                "structure": _parse_struct_list(m.group("enum"))[0],
                "structure_alts": tuple(_parse_struct_list(m.group("enum"))[1:]),
                "shape": _parse_shape(m.group("shape")),
                **(
                    {"default_value": ScalarLiteral.from_text(m.group("default"))}
                    if m.group("default")
                    else {}
                ),
            }),
            22,
        ),
        _rule(
            "R5",
            rf"(?P<s>{_STRUCT_RX})\s+of\s+shape\s+(?P<shape1>{_SHAPE_RX})\s+or\s+(?P<shape2>{_SHAPE_RX})",
            ("structure", "shape"),
            lambda m: _page({
                "structure": _canon_struct(m.group("s")),
                "shape": _parse_shape(m.group("shape1")),
                "shape_alts": (_parse_shape(m.group("shape2")),),
            }),
            14,
        ),
        _rule(
            "R6",
            rf"(?:\w+\s*:\s*)?(?:(?P<d>{_DTYPE_RX})|(?P<s>{_STRUCT_RX}))",
            ("structure", "data_type"),
            lambda m: _page(
                {"data_type": _canon_dtype(m.group("d"))}
                if m.group("d")
                else {"structure": _canon_struct(m.group("s"))}
            ),
            1,
        ),
        _rule(
            "R7",
            rf"\{{\s*(?P<enum>{_STRUCT_RX}(?:\s*,\s*{_STRUCT_RX})+)\s*\}}",
            ("structure",),
            lambda m: _page({
                "structure": _parse_struct_list(m.group("enum"))[0],
                "structure_alts": tuple(_parse_struct_list(m.group("enum"))[1:]),
            }),
            2,
        ),
        _rule(
            "R8",
            rf"\{{\s*(?P<enum>{_VALUE_RX}(?:\s*,\s*{_VALUE_RX})+)\s*\}}\s*,?\s*default\s*=\s*(?P<default>{_VALUE_RX})",
            ("allowed_values", "default_value"),
            lambda m: _page({
                "allowed_values": _parse_values(m.group("enum")),
                "default_value": ScalarLiteral.from_text(m.group("default")),
            }),
            12,
        ),
        _rule(
            "R9",
            rf"\{{\s*(?P<enum>{_VALUE_RX}(?:\s*,\s*{_VALUE_RX})+)\s*\}}",
            ("allowed_values",),
            lambda m: _page({"allowed_values": _parse_values(m.group("enum"))}),
            2,
        ),
        _rule(
            "R10",
            rf"(?P<size>\d+)[-\s]length\s+(?P<s>{_STRUCT_RX})(?:\s*\((?P<alts>[^)]*)\))?",
            ("size", "structure"),
            lambda m: _page({
                "size": int(m.group("size")),
                "structure": _canon_struct(m.group("s")),
                "structure_alts": tuple(
                    s for s in _parse_struct_list(m.group("alts") or "")
                    if s != _canon_struct(m.group("s"))
                ),
            }),
            8,
        ),
        _rule(
            "R11",
            rf"(?P<dim>\d+)\s*-?\s*d\s+(?P<s>{_STRUCT_RX})",
            ("dimension", "structure"),
            lambda m: _page({
                "dimension": int(m.group("dim")),
                "structure": _canon_struct(m.group("s")),
            }),
            2,
        ),
        _rule(
            "R12",
            rf"(?P<default>{_VALUE_RX})\s*\((?:def|default)\)(?P<rest>(?:\s*,\s*{_VALUE_RX})*)(?:\s*,?\s*or\s+(?P<last>{_VALUE_RX}))?",
            ("default_value", "allowed_values"),
            lambda m: _page({
                "default_value": ScalarLiteral.from_text(m.group("default")),
                "allowed_values": (
                    (ScalarLiteral.from_text(m.group("default")),)
                    + _parse_values(m.group("rest") or "")
                    + (
                        (ScalarLiteral.from_text(m.group("last")),)
                        if m.group("last")
                        else ()
                    )
                ),
            }),
            8,
        ),
        _rule(
            "R13",
            rf"(?P<s>{_STRUCT_RX})\s+of\s+(?P<d>{_DTYPE_RX})",
            ("structure", "data_type"),
            lambda m: _page({
                "structure": _canon_struct(m.group("s")),
                "data_type": _canon_dtype(m.group("d")),
            }),
            4,
        ),
        _rule(
            "R14",
            rf"(?P<v1>{_VALUE_RX})\s+or\s+(?P<v2>{_VALUE_RX})",
            ("allowed_values",),
            lambda m: _page({
                "allowed_values": (
                    ScalarLiteral.from_text(m.group("v1")),
                    ScalarLiteral.from_text(m.group("v2")),
                ),
            }),
            4,
        ),
        _rule(
            "R15",
            rf"\(?\s*(?P<d>{_DTYPE_RX})\s*,\s*optional\s*\)?",
            ("data_type", "optional"),
            lambda m: _page({"data_type": _canon_dtype(m.group("d"))}, optional_hint=True),
            10,
        ),
        _rule(
            "R16",
            rf"\(?\s*(?P<s>{_STRUCT_RX})\s*,\s*optional\s*\)?",
            ("structure", "optional"),
            lambda m: _page({"structure": _canon_struct(m.group("s"))}, optional_hint=True),
            10,
        ),
        _rule(
            "R17",
            rf"(?P<d>{_DTYPE_RX})\s+or\s+(?P<v>{_VALUE_RX})",
            ("data_type", "allowed_values"),
            lambda m: _page({
                "data_type": _canon_dtype(m.group("d")),
                "allowed_values": (ScalarLiteral.from_text(m.group("v")),),
            }),
            4,
        ),
        _rule(
            "R18",
            rf"(?P<d>{_DTYPE_RX})\s+or\s+(?P<v>{_VALUE_RX})\s*,?\s*default\s*=\s*(?P<default>{_VALUE_RX})",
            ("data_type", "allowed_values", "default_value"),
            lambda m: _page({
                "data_type": _canon_dtype(m.group("d")),
                "allowed_values": (ScalarLiteral.from_text(m.group("v")),),
                "default_value": ScalarLiteral.from_text(m.group("default")),
            }),
            13,
        ),
    ]
    # most-specific first: longest literal match, ties by lower rule id
    rules.sort(key=lambda r: (-r.literal_weight, int(r.rule_id[1:])))
    return tuple(rules)


RULES: tuple[LinguisticRule, ...] = _build_rules()
RULES_BY_ID = {r.rule_id: r for r in RULES}


def apply_rules(sentence: str) -> ParamConstraint:
    """Extract a parametric-page constraint; first matching rule wins.

    The input must already be normalized. A sentence no rule matches yields
    a fully undefined constraint.
    """
    for rule in RULES:
        m = rule.pattern.fullmatch(sentence)
        if m:
            return rule.extract(m)
    return ParamConstraint()


def match_rule(sentence: str) -> str | None:
    """Id of the rule apply_rules would use, or None."""
    for rule in RULES:
        if rule.pattern.fullmatch(sentence):
            return rule.rule_id
    return None


# ---------------------------------------------------------------------------
# example-code mining


@dataclass(frozen=True)
class ValueObservation:
    """A concrete value seen for a parameter in example code."""

    api_id: str
    param: str
    structure: str
    data_type: str | None
    dims: tuple[int, ...]
    source: str = "example-code"


_ARRAY_WRAPPERS = ("array", "asarray", "tensor", "matrix", "sparse")
_CALL_RE = re.compile(r"(?<![\w.])(?P<name>\.?[A-Za-z_][\w.]*)\s*\(")
_IMPORT_RE = re.compile(r"^\s*import\s+([\w.]+)\s+as\s+(\w+)\s*$")
_FROM_IMPORT_RE = re.compile(r"^\s*from\s+([\w.]+)\s+import\s+(.+)$")
_ASSIGN_RE = re.compile(r"^\s*(?P<name>[A-Za-z_]\w*)\s*=\s*(?P<expr>.+)$", re.S)


def _logical_lines(code: str) -> list[str]:
    """Join bracket-continued physical lines; drop comments outside strings."""
    lines: list[str] = []
    buf: list[str] = []
    depth = 0
    for raw in code.splitlines():
        stripped_parts: list[str] = []
        quote: str | None = None
        for ch in raw:
            if quote:
                stripped_parts.append(ch)
                if ch == quote:
                    quote = None
                continue
            if ch in "'\"":
                quote = ch
                stripped_parts.append(ch)
                continue
            if ch == "#":
                break
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth = max(0, depth - 1)
            stripped_parts.append(ch)
        buf.append("".join(stripped_parts))
        if depth == 0:
            joined = " ".join(part.strip() for part in buf).strip()
            if joined:
                lines.append(joined)
            buf = []
    if buf:
        joined = " ".join(part.strip() for part in buf).strip()
        if joined:
            lines.append(joined)
    return lines


def _strip_wrappers(expr: str) -> str:
    """Peel array-constructor wrappers like np.array([...]) down to the literal."""
    expr = expr.strip()
    m = re.match(r"^([\w.]+)\s*\((.*)\)$", expr, re.S)
    if m and m.group(1).rsplit(".", 1)[-1] in _ARRAY_WRAPPERS:
        return _strip_wrappers(m.group(2))
    return expr


def _literal_value(expr: str, env: dict) -> tuple[bool, object]:
    """Resolve an argument expression to a literal value if possible."""
    expr = expr.strip()
    if re.fullmatch(r"[A-Za-z_]\w*", expr):
        if expr in env:
            return True, env[expr]
        return False, None
    expr = _strip_wrappers(expr)
    try:
        return True, ast.literal_eval(expr)
    except (ValueError, SyntaxError):
        return False, None


def _find_call_args(line: str, open_paren: int) -> list[str] | None:
    """Top-level argument chunks of the call whose '(' is at ``open_paren``."""
    depth = 0
    quote: str | None = None
    for end in range(open_paren, len(line)):
        ch = line[end]
        if quote:
            if ch == quote:
                quote = None
            continue
        if ch in "'\"":
            quote = ch
        elif ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth == 0:
                body = line[open_paren + 1 : end]
                if not body.strip():
                    return []
                return _split_top_level(body)
    return None


def _known_by_simple_name(known: dict) -> dict:
    by_name: dict = {}
    for api_id in sorted(known):
        by_name.setdefault(api_id.rsplit(".", 1)[-1], api_id)
    return by_name


def _resolve_call(name: str, known: dict, by_simple: dict, aliases: dict) -> str | None:
    name = name.lstrip(".")
    dotted = name
    head = dotted.split(".", 1)
    if head[0] in aliases and len(head) > 1:
        dotted = aliases[head[0]] + "." + head[1]
    elif head[0] in aliases and len(head) == 1:
        dotted = aliases[head[0]]
    if dotted in known:
        return dotted
    candidates = sorted(a for a in known if a.endswith("." + dotted))
    if candidates:
        return candidates[0]
    return by_simple.get(dotted.rsplit(".", 1)[-1])


def _observe(api_id: str, param: str, value: object) -> ValueObservation | None:
    dims = nested_dims(value)
    if dims is None:
        return None
    return ValueObservation(
        api_id=api_id,
        param=param,
        structure=value_structure(value),
        data_type=leaf_dtype(value),
        dims=dims,
    )


def mine_example(example_code: str, known: dict) -> list[ValueObservation]:
    """Observe concrete argument values for known APIs in example code.

    ``known`` maps api_id to ApiSpec. Fragments are best effort: unparseable
    code yields no observations, variables bound to literals (possibly via
    array-constructor wrappers) count as literals.
    """
    if not known:
        raise ValueError("known API set must be nonempty")
    observations: list[ValueObservation] = []
    by_simple = _known_by_simple_name(known)
    aliases: dict = {}
    env: dict = {}
    try:
        lines = _logical_lines(example_code)
    except Exception:  # malformed fragment
        logger.warning("example code could not be scanned; skipping")
        return []
    for line in lines:
        m = _IMPORT_RE.match(line)
        if m:
            aliases[m.group(2)] = m.group(1)
            continue
        m = _FROM_IMPORT_RE.match(line)
        if m:
            base = m.group(1)
            for piece in m.group(2).split(","):
                piece = piece.strip()
                if not piece:
                    continue
                if " as " in piece:
                    real, alias = [p.strip() for p in piece.split(" as ", 1)]
                    aliases[alias] = f"{base}.{real}"
                else:
                    aliases[piece] = f"{base}.{piece}"
            continue
        for call in _CALL_RE.finditer(line):
            api_id = _resolve_call(call.group("name"), known, by_simple, aliases)
            if api_id is None:
                continue
            args = _find_call_args(line, call.end() - 1)
            if args is None:
                continue
            spec = known[api_id]
            positional = 0
            for chunk in args:
                chunk = chunk.strip()
                if not chunk:
                    continue
                kw = re.match(r"^([A-Za-z_]\w*)\s*=(?!=)(?P<expr>.+)$", chunk, re.S)
                if kw:
                    pname = kw.group(1)
                    expr = kw.group("expr")
                else:
                    if positional >= len(spec.params):
                        continue
                    pname = spec.params[positional].name
                    positional += 1
                    expr = chunk
                if spec.param(pname) is None:
                    continue
                ok, value = _literal_value(expr, env)
                if not ok:
                    continue
                obs = _observe(api_id, pname, value)
                if obs is not None:
                    observations.append(obs)
        m = _ASSIGN_RE.match(line)
        if m and "==" not in line.split("=", 1)[0]:
            ok, value = _literal_value(m.group("expr"), env)
            if ok:
                env[m.group("name")] = value
    return observations


def constraint_from_observation(obs: ValueObservation) -> ParamConstraint:
    """Constraint fields an observation contributes: structure, dtype, dimension.

    Concrete lengths stay on the observation; symbolic page shapes remain
    authoritative for the shape field.
    """
    fields: dict = {"structure": obs.structure}
    prov = {"structure": "example-code"}
    if obs.data_type is not None:
        fields["data_type"] = obs.data_type
        prov["data_type"] = "example-code"
    if obs.structure != "scalar" and obs.dims and all(d > 0 for d in obs.dims):
        fields["dimension"] = len(obs.dims)
        prov["dimension"] = "example-code"
    return ParamConstraint(provenance=prov, **fields)


# ---------------------------------------------------------------------------
# knowledge-base assembly


def _kind_of(api_id: str) -> tuple[str, str | None]:
    """Infer (kind, owner) from an api_id's segment capitalization."""
    parts = api_id.split(".")
    if parts[-1][:1].isupper():
        return "class-constructor", None
    if len(parts) >= 2 and parts[-2][:1].isupper():
        return "method", ".".join(parts[:-1])
    return "free-function", None


def _signature_entry(record: DocRecord) -> KbEntry:
    name, params = parse_signature(record.signature_text)
    if name != record.api_id.rsplit(".", 1)[-1]:
        logger.warning(
            "signature name %r differs from api id %r", name, record.api_id
        )
    kind, owner = _kind_of(record.api_id)
    spec = ApiSpec(api_id=record.api_id, kind=kind, params=params, owner=owner)
    constraints: dict = {}
    for p in params:
        fields: dict = {}
        prov: dict = {"optional": "signature"}
        if p.declared_default is not None:
            fields["default_value"] = p.declared_default
            prov["default_value"] = "signature"
        constraints[p.name] = ParamConstraint(
            optional=not p.is_required, provenance=prov, **fields
        )
    return KbEntry(spec=spec, constraints=constraints)


def _page_entry(record: DocRecord, spec: ApiSpec) -> KbEntry:
    constraints: dict = {}
    for pname in sorted(record.param_docs):
        if spec.param(pname) is None:
            logger.warning("%s: parametric page names unknown parameter %r", record.api_id, pname)
            continue
        constraints[pname] = apply_rules(normalize_sentence(record.param_docs[pname]))
    return KbEntry(spec=spec, constraints=constraints)


def propagate_shared(kb: KnowledgeBase) -> KnowledgeBase:
    """Copy example-derived fields between APIs sharing a parameter page.

    Only fields still undefined on the receiving side gain values; their
    provenance is ``propagated``.
    """
    example_fields = ("structure", "data_type", "dimension")
    entries = dict(kb.entries)
    for fp in sorted(kb.page_fingerprints):
        pairs = sorted(kb.page_fingerprints[fp])
        for api_id, pname in pairs:
            entry = entries.get(api_id)
            if entry is None or pname not in entry.constraints:
                continue
            target = entry.constraints[pname]
            for src_api, src_param in pairs:
                if src_api == api_id:
                    continue
                if src_param != pname:
                    continue
                source = entries[src_api].constraints.get(src_param)
                if source is None:
                    continue
                updates: dict = {}
                prov = dict(target.provenance)
                for fname in example_fields:
                    if source.provenance.get(fname) != "example-code":
                        continue
                    if target.has_field(fname):
                        continue
                    if fname == "structure":
                        updates["structure"] = source.structure
                        updates["structure_alts"] = source.structure_alts
                    elif fname == "data_type":
                        updates["data_type"] = source.data_type
                        updates["data_type_alts"] = source.data_type_alts
                    else:
                        updates[fname] = source.dimension
                    prov[fname] = "propagated"
                if updates:
                    new_constraints = dict(entry.constraints)
                    new_constraints[pname] = replace(target, provenance=prov, **updates)
                    entry = KbEntry(spec=entry.spec, constraints=new_constraints)
                    entries[api_id] = entry
                    target = new_constraints[pname]
    return KnowledgeBase(kb.framework, kb.version, entries, kb.page_fingerprints)


def build_kb(
    corpus: list[DocRecord], framework: str = "unknown", version: str = ""
) -> KnowledgeBase:
    """Assemble a knowledge base from documentation records.

    Signatures are parsed first so example mining knows every API, then page
    rules and example observations merge in under provenance precedence, and
    finally example-derived fields propagate across shared parameter pages.
    Deterministic for a given corpus regardless of record order.
    """
    seen: set[str] = set()
    for record in corpus:
        if record.api_id in seen:
            raise ValidationError(f"duplicate api_id in corpus: {record.api_id!r}")
        seen.add(record.api_id)
    records = sorted(corpus, key=lambda r: r.api_id)

    sig_entries = {r.api_id: _signature_entry(r) for r in records}
    known = {api_id: entry.spec for api_id, entry in sig_entries.items()}

    fingerprints: dict = {}
    for r in records:
        if not r.param_docs:
            continue
        fp = r.parametric_page_fingerprint
        pairs = fingerprints.setdefault(fp, [])
        for pname in sorted(r.param_docs):
            if known[r.api_id].param(pname) is not None:
                pairs.append((r.api_id, pname))

    sig_kb = KnowledgeBase(framework, version, sig_entries, fingerprints)

    page_entries = {
        r.api_id: _page_entry(r, known[r.api_id]) for r in records if r.param_docs
    }
    page_kb = KnowledgeBase(framework, version, page_entries)

    observations: list[ValueObservation] = []
    for r in records:
        if r.example_code:
            observations.extend(mine_example(r.example_code, known))
    example_entries: dict = {}
    for obs in observations:
        entry = example_entries.get(obs.api_id)
        constraints = dict(entry.constraints) if entry else {}
        contributed = constraint_from_observation(obs)
        if obs.param in constraints:
            existing = constraints[obs.param]
            # later observations refine only fields the earlier ones left unset
            merged_fields: dict = {}
            prov = dict(existing.provenance)
            for fname in ("structure", "data_type", "dimension"):
                if not existing.has_field(fname) and contributed.has_field(fname):
                    if fname == "structure":
                        merged_fields["structure"] = contributed.structure
                    elif fname == "data_type":
                        merged_fields["data_type"] = contributed.data_type
                    else:
                        merged_fields["dimension"] = contributed.dimension
                    prov[fname] = "example-code"
            constraints[obs.param] = replace(existing, provenance=prov, **merged_fields)
        else:
            constraints[obs.param] = contributed
        example_entries[obs.api_id] = KbEntry(spec=known[obs.api_id], constraints=constraints)
    example_kb = KnowledgeBase(framework, version, example_entries)

    kb = kb_merge(kb_merge(sig_kb, page_kb), example_kb)
    kb = propagate_shared(kb)
    kb.validate()
    return kb


# ---------------------------------------------------------------------------
# corpus file format (JSON Lines, one record per API)


def read_doc_corpus(path: str) -> list[DocRecord]:
    """Read a doc corpus file: one JSON record per line.

    Keys: api_id, signature, params (name -> sentence), example (optional).
    """
    import json

    records: list[DocRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                records.append(
                    DocRecord(
                        api_id=obj["api_id"],
                        signature_text=obj["signature"],
                        param_docs=dict(obj.get("params", {})),
                        example_code=obj.get("example"),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValidationError(f"{path}:{lineno}: malformed doc record: {exc}") from exc
    return records


def write_doc_corpus(records: list[DocRecord], path: str) -> None:
    import json

    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            obj: dict = {"api_id": r.api_id, "signature": r.signature_text}
            if r.param_docs:
                obj["params"] = {k: r.param_docs[k] for k in sorted(r.param_docs)}
            if r.example_code is not None:
                obj["example"] = r.example_code
            fh.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")
