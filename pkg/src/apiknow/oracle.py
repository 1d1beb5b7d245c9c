"""Classifies tests against mined constraints and scores model coverage.

A test is invalid when any argument of any statement violates the constraint
mined for its parameter, or a required parameter is omitted. Calls to APIs
absent from the knowledge base are skipped with a warning: their validity is
unknowable, not wrong. The model-coverage score is an execution-free fitness
proxy over parameter satisfaction, distinct APIs, and pattern-conforming
call transitions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .literals import UNDEFINED, ScalarLiteral, nested_dims, scalar_tag
from .model import ApiSpec, KnowledgeBase, ParamConstraint, kb_lookup
from .testcase import OMITTED, Arg, Statement, TestCase, TestSuite, VarRef
from .usagemining import PatternIndex

logger = logging.getLogger(__name__)

VIOLATION_KINDS = (
    "dtype",
    "structure",
    "shape",
    "size",
    "dimension",
    "allowed-value",
    "missing-required",
)

#: fixed checking order for one argument
_CHECK_ORDER = ("dtype", "structure", "dimension", "shape", "size", "allowed-value")

_UNKNOWN = object()  # value of a variable holding a call result


@dataclass(frozen=True)
class Violation:
    test_id: str
    statement_index: int
    api_id: str
    param: str
    kind: str
    expected: str
    actual: str

    def to_json(self) -> dict:
        return {
            "test_id": self.test_id,
            "statement_index": self.statement_index,
            "api_id": self.api_id,
            "param": self.param,
            "kind": self.kind,
            "expected": self.expected,
            "actual": self.actual,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Violation":
        return cls(
            test_id=obj["test_id"],
            statement_index=obj["statement_index"],
            api_id=obj["api_id"],
            param=obj["param"],
            kind=obj["kind"],
            expected=obj["expected"],
            actual=obj["actual"],
        )


@dataclass(frozen=True)
class ModelCoverage:
    covered_pairs: frozenset  # (api_id, all-args-pass flag)
    distinct_apis: frozenset
    conforming_transitions: int
    score: float


# ---------------------------------------------------------------------------
# value checking


def _leaves(value: object) -> list[object]:
    if isinstance(value, (list, tuple, set)):
        out: list[object] = []
        for item in value:
            out.extend(_leaves(item))
        return out
    if isinstance(value, dict):
        out = []
        for item in value.values():
            out.extend(_leaves(item))
        return out
    return [value]


def _matches_structure(value: object, structure: str) -> bool:
    if structure == "array-like":
        return isinstance(value, (list, tuple))
    if structure == "list":
        return isinstance(value, list)
    if structure == "tuple":
        return isinstance(value, tuple)
    if structure == "set":
        return isinstance(value, set)
    if structure == "dict":
        return isinstance(value, dict)
    if structure == "sparse-matrix":
        return isinstance(value, (list, tuple))
    if structure == "sequence":
        return isinstance(value, (list, tuple))
    if structure == "scalar":
        return not isinstance(value, (list, tuple, set, dict))
    return False


def unify_dims(
    dims: tuple[int, ...], shape_dims: tuple, bindings: dict | None = None
) -> dict | None:
    """Bindings extending ``bindings`` that make dims match, or None.

    Concrete declared dims must equal the actual length; symbolic dims bind
    consistently, including bindings carried in from sibling arguments.
    """
    result = dict(bindings or {})
    if len(dims) != len(shape_dims):
        return None
    for actual, declared in zip(dims, shape_dims):
        if isinstance(declared, int):
            if actual != declared:
                return None
        elif declared in result:
            if result[declared] != actual:
                return None
        else:
            result[declared] = actual
    return result


def _unifies(dims: tuple[int, ...], shape_dims: tuple) -> bool:
    return unify_dims(dims, shape_dims) is not None


def check_value(value: object, constraint: ParamConstraint) -> str | None:
    """First violated constraint kind for a concrete value, or None.

    Checks run dtype, structure, dimension, shape, size, allowed-value;
    undefined fields pass vacuously. Symbolic shape dims unify across the
    argument, so (n,n) demands equal lengths.
    """
    if constraint.data_type != UNDEFINED:
        allowed = {constraint.data_type, *constraint.data_type_alts}
        leaves = _leaves(value)
        if not leaves:
            return "dtype"
        for leaf in leaves:
            if scalar_tag(leaf) not in allowed:
                return "dtype"
    if constraint.structure != UNDEFINED:
        allowed_structs = {constraint.structure, *constraint.structure_alts}
        if not any(_matches_structure(value, s) for s in allowed_structs):
            return "structure"
    if constraint.dimension is not None:
        dims = nested_dims(value)
        if dims is None or len(dims) != constraint.dimension:
            return "dimension"
    if constraint.shape is not None:
        dims = nested_dims(value)
        shapes = (constraint.shape, *constraint.shape_alts)
        if dims is None or not any(_unifies(dims, s.dims) for s in shapes):
            return "shape"
    if constraint.size is not None:
        try:
            length = len(value)  # type: ignore[arg-type]
        except TypeError:
            return "size"
        if length != constraint.size:
            return "size"
    if constraint.allowed_values is not None:
        tag = scalar_tag(value)
        if tag is None:
            return "allowed-value"
        lit = ScalarLiteral.from_python(value)
        if lit not in constraint.allowed_values:
            return "allowed-value"
    return None


def _expected_summary(constraint: ParamConstraint, kind: str) -> str:
    if kind == "dtype":
        return "data_type=" + "|".join((constraint.data_type, *constraint.data_type_alts))
    if kind == "structure":
        return "structure=" + "|".join((constraint.structure, *constraint.structure_alts))
    if kind == "dimension":
        return f"dimension={constraint.dimension}"
    if kind == "shape":
        shapes = (constraint.shape, *constraint.shape_alts)
        return "shape=" + "|".join(s.render() for s in shapes if s is not None)
    if kind == "size":
        return f"size={constraint.size}"
    if kind == "allowed-value":
        values = ", ".join(v.render() for v in constraint.allowed_values or ())
        return f"allowed_values={{{values}}}"
    if kind == "missing-required":
        return "argument required"
    return kind


def _actual_summary(value: object) -> str:
    text = repr(value)
    if len(text) > 60:
        text = text[:57] + "..."
    dims = nested_dims(value)
    if dims not in ((), None) and isinstance(value, (list, tuple)):
        return f"{text} (dims {dims})"
    return text


# ---------------------------------------------------------------------------
# test checking


def _bind_args(stmt: Statement, spec: ApiSpec) -> dict[str, Arg]:
    bound: dict[str, Arg] = {}
    for arg in stmt.args:
        if isinstance(arg.binding, int):
            if 0 <= arg.binding < len(spec.params):
                bound[spec.params[arg.binding].name] = arg
        else:
            if spec.param(arg.binding) is not None:
                bound[arg.binding] = arg
            else:
                logger.warning("%s: argument for unknown parameter %r", spec.api_id, arg.binding)
    return bound


def _check_call(
    test_id: str,
    index: int,
    stmt: Statement,
    kb: KnowledgeBase,
    env: dict,
) -> tuple[list[Violation], bool]:
    """Violations for one call statement, plus whether the API was known."""
    entry = kb_lookup(kb, stmt.callee)
    if entry is None:
        logger.warning("test %s: call to unknown API %s skipped", test_id, stmt.callee)
        return [], False
    spec = entry.spec
    bound = _bind_args(stmt, spec)
    violations: list[Violation] = []
    for param in spec.params:
        if param.is_varargs:
            continue
        arg = bound.get(param.name)
        provided = arg is not None and arg.value is not OMITTED
        if param.is_required and not provided:
            violations.append(
                Violation(
                    test_id, index, spec.api_id, param.name,
                    "missing-required", "argument required", "omitted",
                )
            )
            continue
        if not provided:
            continue
        constraint = entry.constraints.get(param.name)
        if constraint is None:
            continue
        value = arg.value
        if isinstance(value, VarRef):
            value = env.get(value.name, _UNKNOWN)
        if value is _UNKNOWN:
            continue  # result of an earlier call; not checkable statically
        kind = check_value(value, constraint)
        if kind is not None:
            violations.append(
                Violation(
                    test_id, index, spec.api_id, param.name, kind,
                    _expected_summary(constraint, kind), _actual_summary(value),
                )
            )
    return violations, True


def check_test(test: TestCase, kb: KnowledgeBase) -> tuple[str, list[Violation]]:
    """Verdict ('valid' | 'invalid') and all violations for one test."""
    test.validate()
    env: dict = {}
    violations: list[Violation] = []
    for i, stmt in enumerate(test.statements):
        if stmt.kind == "assign-literal":
            env[stmt.target_var] = stmt.literal
        elif stmt.kind in ("construct", "call"):
            found, _known = _check_call(test.id, i, stmt, kb, env)
            violations.extend(found)
            env[stmt.target_var] = _UNKNOWN
    verdict = "invalid" if violations else "valid"
    return verdict, violations


def check_suite(suite: TestSuite, kb: KnowledgeBase) -> dict[str, tuple[str, list[Violation]]]:
    """check_test over every test, keyed by test id."""
    return {test.id: check_test(test, kb) for test in suite.tests}


# ---------------------------------------------------------------------------
# model coverage


def _conforming_universe(module_ids: set[str], patterns: PatternIndex) -> set[tuple[str, str]]:
    """All (a, b) module transitions endorsed by some usage rule."""
    universe: set[tuple[str, str]] = set()
    for rule in patterns.all_rules():
        if rule.consequent not in module_ids:
            continue
        for a in rule.antecedent:
            if a in module_ids:
                universe.add((a, rule.consequent))
    return universe


def model_coverage(
    suite: TestSuite,
    module_apis: list[ApiSpec],
    kb: KnowledgeBase,
    patterns: PatternIndex,
    weights: tuple[float, float, float] = (0.5, 0.3, 0.2),
) -> ModelCoverage:
    """Execution-free coverage proxy in [0, 1].

    Components: fraction of module APIs called with all arguments passing
    their constraints (weight 0.5), fraction of module APIs called at all
    (0.3), and fraction of the pattern-endorsed transition pairs that the
    suite exercises (0.2, vacuously 1 when patterns endorse none). All three
    are coverage sets, so adding tests never lowers the score.
    """
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")
    module_ids = {spec.api_id for spec in module_apis}
    if not suite.tests or not module_ids:
        return ModelCoverage(frozenset(), frozenset(), 0, 0.0)
    called: set[str] = set()
    all_pass: set[str] = set()
    transitions: set[tuple[str, str]] = set()
    for test in suite.tests:
        env: dict = {}
        previous: str | None = None
        for i, stmt in enumerate(test.statements):
            if stmt.kind == "assign-literal":
                env[stmt.target_var] = stmt.literal
                continue
            if stmt.kind not in ("construct", "call"):
                continue
            if stmt.callee in module_ids:
                called.add(stmt.callee)
                violations, known = _check_call(test.id, i, stmt, kb, env)
                if known and not violations:
                    all_pass.add(stmt.callee)
                if previous is not None:
                    transitions.add((previous, stmt.callee))
                previous = stmt.callee
            env[stmt.target_var] = _UNKNOWN
    universe = _conforming_universe(module_ids, patterns)
    conforming = transitions & universe
    n = len(module_ids)
    param_component = len(all_pass) / n
    distinct_component = len(called) / n
    transition_component = 1.0 if not universe else len(conforming) / len(universe)
    score = (
        weights[0] * param_component
        + weights[1] * distinct_component
        + weights[2] * transition_component
    )
    pairs = frozenset((api, api in all_pass) for api in called)
    return ModelCoverage(pairs, frozenset(called), len(conforming), score)
