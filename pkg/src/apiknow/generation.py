"""Knowledge-guided call-sequence construction and input generation.

The sequence walker realizes the usage-pattern priority rule: a candidate
method enters the priority set when a suffix of the current call sequence
(walked from full length down to two calls, dropping the head each step)
matches a rule antecedent whose consequent is that candidate; the highest
confidence wins, and without any match the backend's own ordering decides.
Inputs come from the variable pool when a pooled value satisfies the mined
constraint, otherwise fresh literals are generated to satisfy it; parameters
with no mined knowledge fall back to a random primitive.

All generation is a pure function of (inputs, config, seed): the time budget
is realized as a deterministic work-unit count derived from budget_seconds.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .emitter import VarNamer
from .literals import DATA_TYPES, UNDEFINED, nested_dims
from .model import ApiSpec, KnowledgeBase, ParamConstraint, ParamSpec
from .oracle import check_test, check_value, unify_dims
from .testcase import OMITTED, Arg, Statement, TestCase, TestSuite, VarRef, content_hash
from .usagemining import PatternIndex

logger = logging.getLogger(__name__)


class GenerationError(Exception):
    """Raised for contradictory constraints or an unusable target module."""


@dataclass(frozen=True)
class GenConfig:
    budget_seconds: float = 300.0
    seed: int = 0
    backend: str = "random"
    max_sequence_length: int = 12
    population_size: int = 20
    mutation_rate: float = 0.3
    p_use_default: float = 0.25
    p_include_optional: float = 0.5
    p_reuse_memory: float = 0.5
    int_range: tuple[int, int] = (-100, 100000)
    float_range: tuple[float, float] = (-100.0, 100.0)
    string_alphabet: str = "abcdefghijklmnopqrstuvwxyz0123456789"
    string_max_length: int = 12
    dim_range: tuple[int, int] = (1, 6)
    work_units_per_second: int = 50
    tests_per_suite: int = 4

    def validate(self) -> None:
        for name in ("mutation_rate", "p_use_default", "p_include_optional", "p_reuse_memory"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"{name} must be in [0,1], got {p}")
        for name in ("int_range", "float_range", "dim_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo}..{hi}")
        if self.dim_range[0] < 1:
            raise ValueError("dim_range must start at 1")
        if self.max_sequence_length < 1 or self.population_size < 1:
            raise ValueError("max_sequence_length and population_size must be >= 1")
        if not self.string_alphabet:
            raise ValueError("string alphabet must be nonempty")

    def budget_units(self) -> int:
        return max(0, int(round(self.budget_seconds * self.work_units_per_second)))


# ---------------------------------------------------------------------------
# Algorithm 1: next method selection


def next_method(
    sequence: list[str],
    candidates: set[str] | list[str],
    patterns: PatternIndex,
    fallback: list[str],
) -> str:
    """Choose the next call guided by usage patterns.

    For each candidate, suffixes of ``sequence`` are walked from full length
    down while longer than one call; the first suffix whose API set equals a
    rule antecedent with the candidate as consequent puts the candidate into
    the priority set at that rule's confidence. The best-ranked priority
    candidate wins; otherwise the first fallback entry does.
    """
    if not candidates:
        raise GenerationError("no candidate methods")
    candidate_set = set(candidates)
    priority: list[tuple[str, object]] = []
    for candidate in sorted(candidate_set):
        suffix = list(sequence)
        while len(suffix) > 1:
            rule = patterns.rule_for(frozenset(suffix), candidate)
            if rule is not None:
                priority.append((candidate, rule))
                break
            suffix = suffix[1:]
    if priority:
        priority.sort(key=lambda item: (-item[1].confidence, -item[1].support_count, item[0]))
        return priority[0][0]
    for candidate in fallback:
        if candidate in candidate_set:
            return candidate
    raise GenerationError("fallback ordering offers no candidate")


# ---------------------------------------------------------------------------
# input synthesis


def _primitive(tag: str, rng: random.Random, config: GenConfig) -> object:
    if tag == "integer":
        return rng.randint(*config.int_range)
    if tag == "float":
        return rng.uniform(*config.float_range)
    if tag == "string":
        length = rng.randint(1, config.string_max_length)
        return "".join(rng.choice(config.string_alphabet) for _ in range(length))
    if tag == "boolean":
        return rng.random() < 0.5
    raise GenerationError(f"cannot generate primitive of type {tag!r}")


def _random_primitive(rng: random.Random, config: GenConfig) -> object:
    return _primitive(rng.choice(DATA_TYPES), rng, config)


def _pick_allowed(constraint: ParamConstraint, rng: random.Random) -> object:
    values = list(constraint.allowed_values or ())
    if constraint.data_type != UNDEFINED:
        tags = {constraint.data_type, *constraint.data_type_alts}
        typed = [v for v in values if v.tag in tags]
        if not typed:
            raise GenerationError(
                f"allowed_values {[v.render() for v in values]} disjoint from "
                f"data_type {constraint.data_type}"
            )
        values = typed
    choice = rng.choice(sorted(values, key=lambda v: (v.tag, repr(v.value))))
    return choice.to_python()


def _instantiate_dims(
    constraint: ParamConstraint,
    rng: random.Random,
    config: GenConfig,
    bindings: dict,
) -> list[int]:
    lo, hi = config.dim_range
    if constraint.shape is not None:
        dims: list[int] = []
        for i, dim in enumerate(constraint.shape.dims):
            if isinstance(dim, int):
                dims.append(dim)
            else:
                if dim not in bindings:
                    if i == 0 and constraint.size is not None:
                        bindings[dim] = constraint.size
                    else:
                        bindings[dim] = rng.randint(lo, hi)
                dims.append(bindings[dim])
        if constraint.size is not None and dims and dims[0] != constraint.size:
            raise GenerationError(
                f"shape {constraint.shape.render()} contradicts size {constraint.size}"
            )
        return dims
    if constraint.dimension is not None:
        dims = [rng.randint(lo, hi) for _ in range(constraint.dimension)]
        if constraint.size is not None:
            dims[0] = constraint.size
        return dims
    if constraint.size is not None:
        return [constraint.size]
    return [rng.randint(lo, hi)]


def _fill(dims: list[int], element, as_tuple: bool):
    if not dims:
        return element()
    items = [_fill(dims[1:], element, as_tuple) for _ in range(dims[0])]
    return tuple(items) if as_tuple else items


def generate_literal(
    constraint: ParamConstraint,
    rng: random.Random,
    config: GenConfig,
    bindings: dict | None = None,
) -> object:
    """A fresh literal satisfying a (partially) defined constraint.

    Symbolic shape dims are drawn uniformly from the configured dim range;
    ``bindings`` carries symbol values across the arguments of one call so
    equal symbols get equal lengths. A constraint that cannot be satisfied
    raises GenerationError naming the contradiction.
    """
    if bindings is None:
        bindings = {}
    if constraint.allowed_values is not None:
        value = _pick_allowed(constraint, rng)
    else:
        structure = constraint.structure
        if structure == UNDEFINED:
            if (
                constraint.shape is not None
                or constraint.dimension is not None
                or constraint.size is not None
            ):
                structure = "array-like"
            else:
                structure = "scalar"
        dtype = constraint.data_type if constraint.data_type != UNDEFINED else None
        if structure == "scalar":
            value = _primitive(dtype, rng, config) if dtype else _random_primitive(rng, config)
        elif structure in ("array-like", "list", "sequence", "sparse-matrix"):
            dims = _instantiate_dims(constraint, rng, config, bindings)
            tag = dtype or rng.choice(DATA_TYPES)
            value = _fill(dims, lambda: _primitive(tag, rng, config), as_tuple=False)
        elif structure == "tuple":
            dims = _instantiate_dims(constraint, rng, config, bindings)
            tag = dtype or rng.choice(DATA_TYPES)
            value = _fill(dims, lambda: _primitive(tag, rng, config), as_tuple=True)
        elif structure == "set":
            dims = _instantiate_dims(constraint, rng, config, bindings)
            size = dims[0]
            tag = dtype or "integer"
            items: set = set()
            attempts = 0
            while len(items) < size and attempts < size * 20 + 20:
                items.add(_primitive(tag, rng, config))
                attempts += 1
            if len(items) < size:
                raise GenerationError(f"cannot draw {size} distinct {tag} values for a set")
            value = items
        elif structure == "dict":
            dims = _instantiate_dims(constraint, rng, config, bindings)
            tag = dtype or rng.choice(DATA_TYPES)
            value = {
                _primitive("string", rng, config): _primitive(tag, rng, config)
                for _ in range(dims[0])
            }
        else:
            raise GenerationError(f"cannot generate structure {structure!r}")
    kind = check_value(value, constraint)
    if kind is not None:
        raise GenerationError(
            f"constraint is self-contradictory: generated value violates {kind}"
        )
    return value


def _satisfies(value: object, constraint: ParamConstraint, bindings: dict) -> bool:
    """check_value plus shape-symbol consistency with sibling arguments."""
    if check_value(value, constraint) is not None:
        return False
    if constraint.shape is None:
        return True
    dims = nested_dims(value)
    if dims is None:
        return False
    for shape in (constraint.shape, *constraint.shape_alts):
        unified = unify_dims(dims, shape.dims, bindings)
        if unified is not None:
            bindings.update(unified)
            return True
    return False


def synth_input(
    param: ParamSpec,
    constraint: ParamConstraint | None,
    pool: list[tuple[str, object]],
    rng: random.Random,
    config: GenConfig,
    memory: list[object] | None = None,
    bindings: dict | None = None,
) -> Arg:
    """Produce one argument for a parameter.

    Pool variables are reused (most recent first) when their value satisfies
    a generative constraint; otherwise a literal is generated to satisfy it,
    preferring values remembered from earlier accepted tests and the declared
    default for optional parameters. A constraint with no generative fields
    yields a random primitive. Optional parameters are included with
    probability p_include_optional; required ones use positional binding.
    ``bindings`` shares symbolic shape dims across one call's arguments.
    """
    if bindings is None:
        bindings = {}
    binding: int | str = param.position if param.is_required else param.name
    if not param.is_required:
        if rng.random() >= config.p_include_optional:
            return Arg(binding, OMITTED)
    if constraint is not None and constraint.is_generative():
        for name, value in reversed(pool):
            if _satisfies(value, constraint, bindings):
                return Arg(binding, VarRef(name))
        if (
            not param.is_required
            and param.declared_default is not None
            and rng.random() < config.p_use_default
        ):
            return Arg(binding, param.declared_default.to_python())
        if memory and rng.random() < config.p_reuse_memory:
            for value in reversed(memory):
                if _satisfies(value, constraint, bindings):
                    return Arg(binding, value)
        return Arg(binding, generate_literal(constraint, rng, config, bindings))
    if (
        not param.is_required
        and param.declared_default is not None
        and rng.random() < config.p_use_default
    ):
        return Arg(binding, param.declared_default.to_python())
    return Arg(binding, _random_primitive(rng, config))


# ---------------------------------------------------------------------------
# test construction shared by both backends


class _TestBuilder:
    """Accumulates statements for one test over a typed variable pool."""

    def __init__(self, kb: KnowledgeBase, config: GenConfig, rng: random.Random, memory: list[object]):
        self.kb = kb
        self.config = config
        self.rng = rng
        self.memory = memory
        self.namer = VarNamer()
        self.statements: list[Statement] = []
        self.sequence: list[str] = []
        self.instances: dict[str, list[str]] = {}  # class api_id -> vars
        self.last_call_var: str | None = None

    def pool(self) -> list[tuple[str, object]]:
        return [
            (s.target_var, s.literal)
            for s in self.statements
            if s.kind == "assign-literal"
        ]

    def eligible(self, module_specs: list[ApiSpec], used: set[str]) -> set[str]:
        out: set[str] = set()
        for spec in module_specs:
            if spec.api_id in used:
                continue
            if spec.kind == "method":
                if self.instances.get(spec.owner):
                    out.add(spec.api_id)
            else:
                out.add(spec.api_id)
        return out

    def append_call(self, api_id: str) -> list[Statement]:
        """Statements realizing one call: literal assigns plus the call itself."""
        entry = self.kb.entries[api_id]
        spec = entry.spec
        prelude: list[Statement] = []
        args: list[Arg] = []
        pool = self.pool()
        bindings: dict = {}  # shared shape symbols across this call's args
        positional_ok = True
        for param in spec.params:
            if param.is_varargs:
                continue
            if not param.is_required:
                positional_ok = False
            try:
                arg = synth_input(
                    param, entry.constraints.get(param.name), pool,
                    self.rng, self.config, self.memory, bindings,
                )
            except GenerationError:
                if param.is_required:
                    raise
                arg = Arg(param.name, OMITTED)  # contradictory constraint; use the default
            if param.is_required and not positional_ok and isinstance(arg.binding, int):
                arg = Arg(param.name, arg.value)
            if arg.value is OMITTED:
                args.append(arg)
                continue
            if isinstance(arg.value, VarRef):
                args.append(arg)
                continue
            var = self.namer.fresh_for(arg.value)
            prelude.append(Statement("assign-literal", target_var=var, literal=arg.value))
            pool.append((var, arg.value))
            args.append(Arg(arg.binding, VarRef(var)))
        target = self.namer.fresh_for(None, result=True)
        if spec.kind == "method":
            receiver = self.instances[spec.owner][-1]
            call = Statement("call", target_var=target, callee=api_id, receiver_var=receiver, args=tuple(args))
        elif spec.kind == "class-constructor":
            call = Statement("construct", target_var=target, callee=api_id, args=tuple(args))
        else:
            call = Statement("call", target_var=target, callee=api_id, args=tuple(args))
        return prelude + [call]

    def commit(self, api_id: str, stmts: list[Statement]) -> None:
        self.statements.extend(stmts)
        self.sequence.append(api_id)
        call = stmts[-1]
        spec = self.kb.entries[api_id].spec
        if spec.kind == "class-constructor":
            self.instances.setdefault(api_id, []).append(call.target_var)
        self.last_call_var = call.target_var

    def commit_existing(self, stmt: Statement) -> None:
        """Register an already-present call without re-synthesizing it."""
        if not stmt.callee:
            return
        self.sequence.append(stmt.callee)
        entry = self.kb.entries.get(stmt.callee)
        if entry and entry.spec.kind == "class-constructor":
            self.instances.setdefault(stmt.callee, []).append(stmt.target_var)
        self.last_call_var = stmt.target_var

    def adopt(self, statements: list[Statement]) -> None:
        """Take over existing statements, reserving their variable names."""
        for stmt in statements:
            if stmt.target_var:
                self.namer.reserve(stmt.target_var)
            self.statements.append(stmt)
            if stmt.kind in ("construct", "call"):
                self.commit_existing(stmt)


def build_test(
    module_specs: list[ApiSpec],
    kb: KnowledgeBase,
    patterns: PatternIndex,
    config: GenConfig,
    rng: random.Random,
    memory: list[object],
    units: int,
    backend: str,
    seed: int,
) -> tuple[TestCase | None, int]:
    """One feedback-directed test; returns (test or None, remaining units).

    Extensions whose arguments violate the mined constraints are discarded
    and the prefix retained: the oracle's verdict substitutes for execution
    feedback.
    """
    builder = _TestBuilder(kb, config, rng, memory)
    used: set[str] = set()
    target_length = rng.randint(1, config.max_sequence_length)
    constructors = sorted(s.api_id for s in module_specs if s.kind == "class-constructor")
    prefix_violations = 0
    while len(builder.sequence) < target_length and units > 0:
        candidates = builder.eligible(module_specs, used)
        if not candidates:
            break
        units -= 1
        if not builder.sequence and constructors:
            start = [c for c in constructors if c in candidates]
            chosen = rng.choice(start) if start else None
            if chosen is None:
                fallback = rng.sample(sorted(candidates), len(candidates))
                chosen = next_method(builder.sequence, candidates, patterns, fallback)
        else:
            fallback = rng.sample(sorted(candidates), len(candidates))
            chosen = next_method(builder.sequence, candidates, patterns, fallback)
        used.add(chosen)
        try:
            stmts = builder.append_call(chosen)
        except GenerationError as exc:
            logger.warning("skipping %s: %s", chosen, exc)
            continue
        trial = TestCase("pending", tuple(builder.statements + stmts), seed=seed, backend=backend)
        _verdict, violations = check_test(trial, kb)
        if len(violations) > prefix_violations:
            continue  # discard the extension, keep the prefix
        prefix_violations = len(violations)
        builder.commit(chosen, stmts)
    if builder.last_call_var is None:
        return None, units
    statements = tuple(
        builder.statements
        + [Statement("assert-not-none", target_var=builder.last_call_var)]
    )
    test = TestCase(content_hash(statements), statements, seed=seed, backend=backend)
    test.validate()
    return test, units


def _collect_memory(test: TestCase, memory: list[object], cap: int = 200) -> None:
    for stmt in test.statements:
        if stmt.kind == "assign-literal":
            memory.append(stmt.literal)
    del memory[:-cap]


def gen_random_suite(
    target_module: str,
    kb: KnowledgeBase,
    patterns: PatternIndex,
    config: GenConfig,
) -> TestSuite:
    """Feedback-directed random generation over the target module."""
    config.validate()
    module_specs = kb.module_apis(target_module)
    if not module_specs:
        raise GenerationError(f"no APIs for target module {target_module!r} in knowledge base")
    rng = random.Random(config.seed)
    units = config.budget_units()
    memory: list[object] = []
    tests: list[TestCase] = []
    ids: set[str] = set()
    while units > 0:
        units -= 1
        test, units = build_test(
            module_specs, kb, patterns, config, rng, memory, units, "random", config.seed
        )
        if test is None:
            continue
        if test.id in ids:
            continue
        ids.add(test.id)
        tests.append(test)
        _collect_memory(test, memory)
    guided = kb.has_mined_constraints() or not patterns.is_empty()
    suite = TestSuite(
        target_module=target_module,
        backend="random",
        seed=config.seed,
        guided=guided,
        tests=tuple(tests),
    )
    suite.validate()
    return suite
