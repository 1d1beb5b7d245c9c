"""Whole-suite genetic search backend.

A population of test suites evolves under tournament selection (size 2),
single-point crossover over test lists, and three mutations: add a call
statement (chosen via the usage-pattern walker), delete a statement with
repair, and regenerate one argument. Fitness is executed branch coverage
from a harness feedback file when supplied (tests keyed by content-hash id),
with the model-coverage proxy as tiebreak and as the sole signal otherwise.
Elitism keeps the best suite; everything is deterministic given the seed.
"""

from __future__ import annotations

import logging
import random
from dataclasses import replace

from .generation import GenConfig, GenerationError, _TestBuilder, build_test, next_method, synth_input
from .model import ApiSpec, KnowledgeBase
from .oracle import model_coverage
from .testcase import (
    OMITTED,
    Arg,
    Statement,
    TestCase,
    TestSuite,
    VarRef,
    content_hash,
    repair_sequence,
)
from .usagemining import PatternIndex

logger = logging.getLogger(__name__)


def _suite_fitness(
    tests: list[TestCase],
    target_module: str,
    module_specs: list[ApiSpec],
    kb: KnowledgeBase,
    patterns: PatternIndex,
    feedback: dict[str, frozenset] | None,
) -> tuple[float, float]:
    probe = TestSuite(target_module, "search", 0, True, tuple(tests))
    proxy = model_coverage(probe, module_specs, kb, patterns).score
    if feedback:
        covered: set = set()
        for test in tests:
            covered |= feedback.get(test.id, frozenset())
        return (float(len(covered)), proxy)
    return (0.0, proxy)


def _rehash(test: TestCase) -> TestCase:
    return replace(test, id=content_hash(test.statements))


def _finalize(test: TestCase) -> TestCase | None:
    """Repair, restore the trailing assertion, drop call-free tests."""
    statements = [s for s in test.statements if s.kind != "assert-not-none"]
    repaired = repair_sequence(replace(test, statements=tuple(statements)))
    calls = [s for s in repaired.statements if s.kind in ("construct", "call")]
    if not calls:
        return None
    statements = list(repaired.statements) + [
        Statement("assert-not-none", target_var=calls[-1].target_var)
    ]
    return _rehash(replace(repaired, statements=tuple(statements)))


def _mutate_add_statement(
    test: TestCase,
    module_specs: list[ApiSpec],
    kb: KnowledgeBase,
    patterns: PatternIndex,
    config: GenConfig,
    rng: random.Random,
) -> TestCase | None:
    builder = _TestBuilder(kb, config, rng, memory=[])
    builder.adopt([s for s in test.statements if s.kind != "assert-not-none"])
    used = set(builder.sequence)
    candidates = builder.eligible(module_specs, used)
    if not candidates:
        return None
    fallback = rng.sample(sorted(candidates), len(candidates))
    chosen = next_method(builder.sequence, candidates, patterns, fallback)
    try:
        stmts = builder.append_call(chosen)
    except GenerationError:
        return None
    statements = tuple(builder.statements + stmts)
    return _finalize(replace(test, statements=statements))


def _mutate_delete_statement(test: TestCase, rng: random.Random) -> TestCase | None:
    indices = [i for i, s in enumerate(test.statements) if s.kind != "assert-not-none"]
    if not indices:
        return None
    drop = rng.choice(indices)
    statements = tuple(s for i, s in enumerate(test.statements) if i != drop)
    return _finalize(replace(test, statements=statements))


def _mutate_regen_arg(
    test: TestCase,
    kb: KnowledgeBase,
    config: GenConfig,
    rng: random.Random,
) -> TestCase | None:
    calls = [
        (i, s)
        for i, s in enumerate(test.statements)
        if s.kind in ("construct", "call") and s.args and kb.entries.get(s.callee)
    ]
    if not calls:
        return None
    index, stmt = calls[rng.randrange(len(calls))]
    entry = kb.entries[stmt.callee]
    arg_index = rng.randrange(len(stmt.args))
    old = stmt.args[arg_index]
    param = (
        entry.spec.params[old.binding]
        if isinstance(old.binding, int)
        else entry.spec.param(old.binding)
    )
    if param is None:
        return None
    fresh = synth_input(param, entry.constraints.get(param.name), [], rng, config, None)
    statements = list(test.statements)
    if fresh.value is OMITTED or isinstance(fresh.value, VarRef):
        new_args = list(stmt.args)
        new_args[arg_index] = Arg(old.binding, OMITTED)
        statements[index] = replace(stmt, args=tuple(new_args))
    else:
        taken = {s.target_var for s in test.statements if s.target_var}
        n = 0
        while f"regen_{n}" in taken:
            n += 1
        var = f"regen_{n}"
        statements.insert(index, Statement("assign-literal", target_var=var, literal=fresh.value))
        new_args = list(stmt.args)
        new_args[arg_index] = Arg(old.binding, VarRef(var))
        statements[index + 1] = replace(statements[index + 1], args=tuple(new_args))
    return _finalize(replace(test, statements=tuple(statements)))


def _mutate_suite(
    tests: list[TestCase],
    module_specs: list[ApiSpec],
    kb: KnowledgeBase,
    patterns: PatternIndex,
    config: GenConfig,
    rng: random.Random,
    memory: list[object],
    seed: int,
) -> list[TestCase]:
    out = list(tests)
    if not out:
        test, _units = build_test(
            module_specs, kb, patterns, config, rng, memory, config.max_sequence_length, "search", seed
        )
        return [test] if test else []
    index = rng.randrange(len(out))
    op = rng.choice(("add-statement", "delete-statement", "regen-arg"))
    if op == "add-statement":
        mutated = _mutate_add_statement(out[index], module_specs, kb, patterns, config, rng)
    elif op == "delete-statement":
        mutated = _mutate_delete_statement(out[index], rng)
    else:
        mutated = _mutate_regen_arg(out[index], kb, config, rng)
    if mutated is None:
        del out[index]
    else:
        out[index] = mutated
    return out


def _crossover(
    a: list[TestCase], b: list[TestCase], rng: random.Random, cap: int
) -> list[TestCase]:
    cut_a = rng.randint(0, len(a))
    cut_b = rng.randint(0, len(b))
    child = list(a[:cut_a]) + list(b[cut_b:])
    return child[:cap]


def _dedup(tests: list[TestCase]) -> list[TestCase]:
    seen: set[str] = set()
    out: list[TestCase] = []
    for t in tests:
        if t.id not in seen:
            seen.add(t.id)
            out.append(t)
    return out


def gen_search_suite(
    target_module: str,
    kb: KnowledgeBase,
    patterns: PatternIndex,
    config: GenConfig,
    feedback: dict[str, frozenset] | None = None,
) -> TestSuite:
    """Whole-suite genetic search over the target module."""
    config.validate()
    module_specs = kb.module_apis(target_module)
    if not module_specs:
        raise GenerationError(f"no APIs for target module {target_module!r} in knowledge base")
    rng = random.Random(config.seed)
    units = config.budget_units()
    guided = kb.has_mined_constraints() or not patterns.is_empty()
    memory: list[object] = []
    fitness_memo: dict[tuple, tuple[float, float]] = {}

    def fitness(tests: list[TestCase]) -> tuple[float, float]:
        key = tuple(t.id for t in tests)
        cached = fitness_memo.get(key)
        if cached is None:
            cached = _suite_fitness(tests, target_module, module_specs, kb, patterns, feedback)
            fitness_memo[key] = cached
        return cached

    population: list[list[TestCase]] = []
    while len(population) < config.population_size and units > 0:
        tests: list[TestCase] = []
        while len(tests) < config.tests_per_suite and units > 0:
            units -= 1
            test, units = build_test(
                module_specs, kb, patterns, config, rng, memory, units, "search", config.seed
            )
            if test is not None:
                tests.append(test)
        population.append(_dedup(tests))
    if not population:
        return TestSuite(target_module, "search", config.seed, guided, ())

    cap = max(2 * config.tests_per_suite, 2)

    def tournament() -> list[TestCase]:
        i = rng.randrange(len(population))
        j = rng.randrange(len(population))
        return population[i] if fitness(population[i]) >= fitness(population[j]) else population[j]

    while units > 0:
        scored = sorted(range(len(population)), key=lambda i: fitness(population[i]), reverse=True)
        new_population: list[list[TestCase]] = [population[scored[0]]]  # elitism of 1
        while len(new_population) < config.population_size and units > 0:
            units -= 1
            parent_a = tournament()
            parent_b = tournament()
            child = _crossover(parent_a, parent_b, rng, cap)
            if rng.random() < config.mutation_rate:
                child = _mutate_suite(
                    child, module_specs, kb, patterns, config, rng, memory, config.seed
                )
            new_population.append(_dedup(child))
        population = new_population

    best = max(population, key=fitness)
    suite = TestSuite(
        target_module=target_module,
        backend="search",
        seed=config.seed,
        guided=guided,
        tests=tuple(best),
    )
    suite.validate()
    return suite
