"""Domain types for API knowledge and knowledge-base persistence.

A KnowledgeBase maps fully qualified API ids to their signature spec and the
per-parameter constraints mined for them. Instances are immutable once built
and safe to share; merging and loading construct new instances.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace

from .literals import DATA_TYPES, STRUCTURES, UNDEFINED, ScalarLiteral

logger = logging.getLogger(__name__)

API_KINDS = ("class-constructor", "free-function", "method")

#: provenance tags, strongest first; merge conflicts resolve left to right
PROVENANCE_PRECEDENCE = ("example-code", "parametric-page", "signature", "propagated")

#: constraint fields that carry provenance
CONSTRAINT_FIELDS = (
    "structure",
    "data_type",
    "default_value",
    "shape",
    "size",
    "dimension",
    "allowed_values",
    "optional",
)


class KnowledgeBaseError(Exception):
    """Base class for knowledge-base failures."""


class PersistenceError(KnowledgeBaseError):
    """Raised when a knowledge-base file cannot be read or written."""


class ValidationError(KnowledgeBaseError):
    """Raised when a record violates a type invariant."""


class MergeError(KnowledgeBaseError):
    """Raised when two knowledge bases cannot be merged."""


@dataclass(frozen=True)
class ParamSpec:
    """One parameter as declared in a signature."""

    name: str
    position: int
    is_required: bool
    declared_default: ScalarLiteral | None = None

    @property
    def is_varargs(self) -> bool:
        return self.name.startswith("*")

    def validate(self) -> None:
        if not self.name:
            raise ValidationError("parameter with empty name")
        if self.is_varargs:
            # recorded as a single optional pseudo-parameter, no default
            if self.is_required or self.declared_default is not None:
                raise ValidationError(f"varargs parameter {self.name!r} must be optional without default")
            return
        if self.is_required and self.declared_default is not None:
            raise ValidationError(f"required parameter {self.name!r} carries a default")
        if not self.is_required and self.declared_default is None:
            raise ValidationError(f"optional parameter {self.name!r} lacks a default")


@dataclass(frozen=True)
class ApiSpec:
    """Identity and signature of one API."""

    api_id: str
    kind: str
    params: tuple[ParamSpec, ...] = ()
    owner: str | None = None

    @property
    def call_name(self) -> str:
        return self.api_id.rsplit(".", 1)[-1]

    @property
    def module(self) -> str:
        """Import path of the module providing this API."""
        if self.kind == "method" and self.owner:
            return self.owner.rsplit(".", 1)[0] if "." in self.owner else ""
        return self.api_id.rsplit(".", 1)[0] if "." in self.api_id else ""

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None

    def validate(self) -> None:
        if not self.api_id:
            raise ValidationError("ApiSpec with empty api_id")
        if self.kind not in API_KINDS:
            raise ValidationError(f"{self.api_id}: unknown kind {self.kind!r}")
        if self.kind == "method" and not self.owner:
            raise ValidationError(f"{self.api_id}: method without owner")
        if self.kind == "free-function" and self.owner:
            raise ValidationError(f"{self.api_id}: free function with owner")
        for i, p in enumerate(self.params):
            p.validate()
            if p.position != i:
                raise ValidationError(f"{self.api_id}: parameter positions not contiguous at {p.name!r}")


@dataclass(frozen=True)
class ShapeSpec:
    """Declared shape; dims are symbolic names or concrete positive sizes."""

    dims: tuple[str | int, ...]

    def validate(self) -> None:
        if not self.dims:
            raise ValidationError("empty shape")
        for d in self.dims:
            if isinstance(d, bool) or (isinstance(d, int) and d <= 0):
                raise ValidationError(f"non-positive concrete dim {d!r} in shape")
            if isinstance(d, str) and not d:
                raise ValidationError("empty symbolic dim in shape")

    def to_json(self) -> list:
        return list(self.dims)

    @classmethod
    def from_json(cls, obj: list) -> "ShapeSpec":
        return cls(tuple(obj))

    def render(self) -> str:
        inner = ",".join(str(d) for d in self.dims)
        return f"({inner},)" if len(self.dims) == 1 else f"({inner})"


@dataclass(frozen=True)
class ParamConstraint:
    """Mined constraints for one parameter.

    Every field either carries a value together with a provenance tag or is
    undefined. ``optional`` always has a value; its provenance records which
    source decided it.
    """

    structure: str = UNDEFINED
    structure_alts: tuple[str, ...] = ()
    data_type: str = UNDEFINED
    data_type_alts: tuple[str, ...] = ()
    default_value: ScalarLiteral | None = None
    shape: ShapeSpec | None = None
    shape_alts: tuple[ShapeSpec, ...] = ()
    size: int | None = None
    dimension: int | None = None
    allowed_values: tuple[ScalarLiteral, ...] | None = None
    optional: bool = False
    provenance: dict = field(default_factory=dict)

    def is_undefined(self) -> bool:
        """True when no constraint field beyond optionality was mined."""
        return self.default_value is None and not self.is_generative()

    def is_generative(self) -> bool:
        """True when some field constrains what values look like.

        A bare default (signature knowledge) does not count: it says nothing
        about the shape of fresh values.
        """
        return not (
            self.structure == UNDEFINED
            and self.data_type == UNDEFINED
            and self.shape is None
            and self.size is None
            and self.dimension is None
            and self.allowed_values is None
        )

    def has_field(self, name: str) -> bool:
        if name == "structure":
            return self.structure != UNDEFINED
        if name == "data_type":
            return self.data_type != UNDEFINED
        if name == "optional":
            return "optional" in self.provenance
        return getattr(self, name) is not None

    def validate(self, where: str = "") -> None:
        ctx = f"{where}: " if where else ""
        if self.structure != UNDEFINED and self.structure not in STRUCTURES:
            raise ValidationError(f"{ctx}unknown structure {self.structure!r}")
        for alt in self.structure_alts:
            if alt not in STRUCTURES:
                raise ValidationError(f"{ctx}unknown structure alternative {alt!r}")
        if self.data_type != UNDEFINED and self.data_type not in DATA_TYPES:
            raise ValidationError(f"{ctx}unknown data type {self.data_type!r}")
        for alt in self.data_type_alts:
            if alt not in DATA_TYPES:
                raise ValidationError(f"{ctx}unknown data type alternative {alt!r}")
        if self.shape is not None:
            self.shape.validate()
        for alt in self.shape_alts:
            alt.validate()
        if self.size is not None and self.size < 0:
            raise ValidationError(f"{ctx}negative size {self.size}")
        if self.dimension is not None and self.dimension < 1:
            raise ValidationError(f"{ctx}dimension must be >= 1, got {self.dimension}")
        if self.allowed_values is not None and not self.allowed_values:
            raise ValidationError(f"{ctx}allowed_values present but empty")
        for fname in CONSTRAINT_FIELDS:
            if fname == "optional":
                continue
            if self.has_field(fname) and fname not in self.provenance:
                raise ValidationError(f"{ctx}field {fname!r} set without provenance")
        for fname, tag in self.provenance.items():
            if fname not in CONSTRAINT_FIELDS:
                raise ValidationError(f"{ctx}provenance for unknown field {fname!r}")
            if tag not in PROVENANCE_PRECEDENCE:
                raise ValidationError(f"{ctx}unknown provenance tag {tag!r}")

    def to_json(self) -> dict:
        out: dict = {"optional": self.optional}
        if self.structure != UNDEFINED:
            out["structure"] = self.structure
        if self.structure_alts:
            out["structure_alts"] = list(self.structure_alts)
        if self.data_type != UNDEFINED:
            out["data_type"] = self.data_type
        if self.data_type_alts:
            out["data_type_alts"] = list(self.data_type_alts)
        if self.default_value is not None:
            out["default_value"] = self.default_value.to_json()
        if self.shape is not None:
            out["shape"] = self.shape.to_json()
        if self.shape_alts:
            out["shape_alts"] = [s.to_json() for s in self.shape_alts]
        if self.size is not None:
            out["size"] = self.size
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.allowed_values is not None:
            out["allowed_values"] = [v.to_json() for v in self.allowed_values]
        if self.provenance:
            out["provenance"] = dict(sorted(self.provenance.items()))
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ParamConstraint":
        return cls(
            structure=obj.get("structure", UNDEFINED),
            structure_alts=tuple(obj.get("structure_alts", ())),
            data_type=obj.get("data_type", UNDEFINED),
            data_type_alts=tuple(obj.get("data_type_alts", ())),
            default_value=(
                ScalarLiteral.from_json(obj["default_value"]) if "default_value" in obj else None
            ),
            shape=ShapeSpec.from_json(obj["shape"]) if "shape" in obj else None,
            shape_alts=tuple(ShapeSpec.from_json(s) for s in obj.get("shape_alts", ())),
            size=obj.get("size"),
            dimension=obj.get("dimension"),
            allowed_values=(
                tuple(ScalarLiteral.from_json(v) for v in obj["allowed_values"])
                if "allowed_values" in obj
                else None
            ),
            optional=obj.get("optional", False),
            provenance=dict(obj.get("provenance", {})),
        )


@dataclass(frozen=True)
class KbEntry:
    spec: ApiSpec
    constraints: dict  # param name -> ParamConstraint

    def validate(self) -> None:
        self.spec.validate()
        for name, constraint in self.constraints.items():
            if self.spec.param(name) is None:
                raise ValidationError(
                    f"{self.spec.api_id}: constraint for unknown parameter {name!r}"
                )
            constraint.validate(where=f"{self.spec.api_id}.{name}")


@dataclass(frozen=True)
class KnowledgeBase:
    """All mined API knowledge for one framework."""

    framework: str
    version: str = ""
    entries: dict = field(default_factory=dict)  # api_id -> KbEntry
    page_fingerprints: dict = field(default_factory=dict)  # hash -> [(api_id, param)]

    def validate(self) -> None:
        for api_id, entry in self.entries.items():
            if api_id != entry.spec.api_id:
                raise ValidationError(f"entry key {api_id!r} != spec id {entry.spec.api_id!r}")
            entry.validate()
        for fp, pairs in self.page_fingerprints.items():
            for api_id, _param in pairs:
                if api_id not in self.entries:
                    raise ValidationError(f"fingerprint {fp} names unknown api {api_id!r}")

    def api_ids(self) -> list[str]:
        return sorted(self.entries)

    def module_apis(self, module: str) -> list[ApiSpec]:
        """Specs of all APIs provided by ``module``, sorted by id."""
        return [
            self.entries[api_id].spec
            for api_id in self.api_ids()
            if self.entries[api_id].spec.module == module
        ]

    def constraint(self, api_id: str, param: str) -> ParamConstraint | None:
        entry = self.entries.get(api_id)
        if entry is None:
            return None
        return entry.constraints.get(param)

    def has_mined_constraints(self) -> bool:
        return any(
            not c.is_undefined()
            for entry in self.entries.values()
            for c in entry.constraints.values()
        )


def kb_lookup(kb: KnowledgeBase, api_id: str) -> KbEntry | None:
    """Exact, case-sensitive lookup; None for unknown ids."""
    return kb.entries.get(api_id)


def _check_framework(primary: KnowledgeBase, secondary: KnowledgeBase) -> None:
    if primary.framework != secondary.framework:
        raise MergeError(
            f"framework mismatch: {primary.framework!r} vs {secondary.framework!r}"
        )


def _merge_field(api_id: str, param: str, name: str, ours: ParamConstraint, theirs: ParamConstraint):
    """Pick the winning (value-bundle, provenance) for one constraint field."""
    our_has = ours.has_field(name)
    their_has = theirs.has_field(name)
    if not their_has:
        return ours
    if not our_has:
        return theirs
    if name == "optional":
        # signature decides optionality, overriding parametric-page hints
        order = ("signature", "parametric-page", "example-code", "propagated")
    else:
        order = PROVENANCE_PRECEDENCE
    our_rank = order.index(ours.provenance.get(name, order[-1]))
    their_rank = order.index(theirs.provenance.get(name, order[-1]))
    winner, loser = (ours, theirs) if our_rank <= their_rank else (theirs, ours)
    if _field_bundle(winner, name) != _field_bundle(loser, name):
        logger.info(
            "merge conflict on %s.%s %s: keeping %s value over %s",
            api_id, param, name,
            winner.provenance.get(name), loser.provenance.get(name),
        )
    return winner


def _field_bundle(c: ParamConstraint, name: str) -> tuple:
    """The value group a field carries (main value plus its alternatives)."""
    if name == "structure":
        return (c.structure, c.structure_alts)
    if name == "data_type":
        return (c.data_type, c.data_type_alts)
    if name == "shape":
        return (c.shape, c.shape_alts)
    return (getattr(c, name),)


def merge_constraints(api_id: str, param: str, ours: ParamConstraint, theirs: ParamConstraint) -> ParamConstraint:
    """Field-wise merge of two constraints under provenance precedence."""
    merged = ParamConstraint(optional=ours.optional)
    prov: dict = {}
    updates: dict = {}
    for name in CONSTRAINT_FIELDS:
        source = _merge_field(api_id, param, name, ours, theirs)
        if not source.has_field(name):
            continue
        if name == "structure":
            updates["structure"] = source.structure
            updates["structure_alts"] = source.structure_alts
        elif name == "data_type":
            updates["data_type"] = source.data_type
            updates["data_type_alts"] = source.data_type_alts
        elif name == "shape":
            updates["shape"] = source.shape
            updates["shape_alts"] = source.shape_alts
        else:
            updates[name] = getattr(source, name)
        if name in source.provenance:
            prov[name] = source.provenance[name]
    return replace(merged, provenance=prov, **updates)


def kb_merge(primary: KnowledgeBase, secondary: KnowledgeBase) -> KnowledgeBase:
    """Union of two knowledge bases for the same framework.

    Per-field conflicts resolve by provenance precedence
    example-code > parametric-page > signature > propagated; conflicting
    values are logged.
    """
    _check_framework(primary, secondary)
    entries: dict = {}
    for api_id in sorted(set(primary.entries) | set(secondary.entries)):
        ours = primary.entries.get(api_id)
        theirs = secondary.entries.get(api_id)
        if ours is None:
            entries[api_id] = theirs
            continue
        if theirs is None:
            entries[api_id] = ours
            continue
        if ours.spec != theirs.spec:
            logger.info("merge: differing specs for %s, keeping primary", api_id)
        constraints: dict = {}
        for name in sorted(set(ours.constraints) | set(theirs.constraints)):
            a = ours.constraints.get(name)
            b = theirs.constraints.get(name)
            if a is None:
                constraints[name] = b
            elif b is None:
                constraints[name] = a
            else:
                constraints[name] = merge_constraints(api_id, name, a, b)
        entries[api_id] = KbEntry(spec=ours.spec, constraints=constraints)
    fingerprints: dict = {}
    for src in (primary, secondary):
        for fp, pairs in src.page_fingerprints.items():
            known = fingerprints.setdefault(fp, [])
            for pair in pairs:
                if tuple(pair) not in {tuple(p) for p in known}:
                    known.append(tuple(pair))
    for fp in fingerprints:
        fingerprints[fp] = sorted(fingerprints[fp])
    version = primary.version or secondary.version
    merged = KnowledgeBase(primary.framework, version, entries, fingerprints)
    merged.validate()
    return merged


def _spec_to_json(spec: ApiSpec) -> dict:
    params = []
    for p in spec.params:
        rec: dict = {"name": p.name, "position": p.position, "required": p.is_required}
        if p.declared_default is not None:
            rec["default"] = p.declared_default.to_json()
        params.append(rec)
    out = {"api_id": spec.api_id, "kind": spec.kind, "params": params}
    if spec.owner:
        out["owner"] = spec.owner
    return out


def _spec_from_json(obj: dict) -> ApiSpec:
    try:
        params = tuple(
            ParamSpec(
                name=p["name"],
                position=p["position"],
                is_required=p["required"],
                declared_default=ScalarLiteral.from_json(p["default"]) if "default" in p else None,
            )
            for p in obj["params"]
        )
        return ApiSpec(api_id=obj["api_id"], kind=obj["kind"], params=params, owner=obj.get("owner"))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed ApiSpec record: {exc}") from exc


def kb_to_json(kb: KnowledgeBase) -> dict:
    entries = {}
    for api_id in sorted(kb.entries):
        entry = kb.entries[api_id]
        entries[api_id] = {
            "spec": _spec_to_json(entry.spec),
            "constraints": {
                name: entry.constraints[name].to_json() for name in sorted(entry.constraints)
            },
        }
    return {
        "framework": kb.framework,
        "version": kb.version,
        "entries": entries,
        "page_fingerprints": {
            fp: [list(p) for p in sorted(kb.page_fingerprints[fp])]
            for fp in sorted(kb.page_fingerprints)
        },
    }


def kb_from_json(obj: dict) -> KnowledgeBase:
    if not isinstance(obj, dict):
        raise ValidationError("knowledge base file must hold a JSON object")
    for key in ("framework", "entries"):
        if key not in obj:
            raise ValidationError(f"knowledge base file missing key {key!r}")
    entries = {}
    for api_id, rec in obj["entries"].items():
        try:
            spec = _spec_from_json(rec["spec"])
            constraints = {
                name: ParamConstraint.from_json(c) for name, c in rec.get("constraints", {}).items()
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed entry for {api_id!r}: {exc}") from exc
        entries[api_id] = KbEntry(spec=spec, constraints=constraints)
    fingerprints = {
        fp: [tuple(p) for p in pairs]
        for fp, pairs in obj.get("page_fingerprints", {}).items()
    }
    kb = KnowledgeBase(
        framework=obj["framework"],
        version=obj.get("version", ""),
        entries=entries,
        page_fingerprints=fingerprints,
    )
    kb.validate()
    return kb


def kb_save(kb: KnowledgeBase, path: str) -> None:
    """Write ``kb`` as deterministic UTF-8 JSON; kb_load restores it exactly."""
    try:
        text = json.dumps(kb_to_json(kb), indent=2, sort_keys=True, ensure_ascii=False)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise PersistenceError(f"cannot write knowledge base to {path}: {exc}") from exc


def kb_load(path: str) -> KnowledgeBase:
    """Read a knowledge base written by kb_save, validating all invariants."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PersistenceError(f"cannot read knowledge base from {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PersistenceError(f"{path} is not valid JSON: {exc}") from exc
    return kb_from_json(obj)
