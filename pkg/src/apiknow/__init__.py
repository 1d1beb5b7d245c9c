"""apiknow: API knowledge mining and knowledge-guided unit test generation.

The pipeline mines per-parameter input constraints from documentation
records and API usage patterns from code-fragment corpora, then uses both to
guide random and search-based test generation, classify generated tests for
constraint validity, and emit runnable test source files.
"""

from .docmining import DocRecord, apply_rules, build_kb, normalize_sentence, parse_signature
from .emitter import EmitStyle, emit_suite, emit_test
from .generation import GenConfig, GenerationError, gen_random_suite, next_method, synth_input
from .literals import ScalarLiteral
from .model import (
    ApiSpec,
    KnowledgeBase,
    KnowledgeBaseError,
    ParamConstraint,
    ParamSpec,
    ShapeSpec,
    kb_load,
    kb_lookup,
    kb_merge,
    kb_save,
)
from .oracle import ModelCoverage, Violation, check_test, check_value, model_coverage
from .search import gen_search_suite
from .testcase import Arg, Statement, TestCase, TestSuite, repair_sequence
from .usagemining import (
    PatternIndex,
    Transaction,
    UsageRule,
    build_pattern_index,
    build_transactions,
    derive_rules,
    extract_api_calls,
    mine_frequent_itemsets,
)

__version__ = "0.1.0"

__all__ = [
    "ApiSpec",
    "Arg",
    "DocRecord",
    "EmitStyle",
    "GenConfig",
    "GenerationError",
    "KnowledgeBase",
    "KnowledgeBaseError",
    "ModelCoverage",
    "ParamConstraint",
    "ParamSpec",
    "PatternIndex",
    "ScalarLiteral",
    "ShapeSpec",
    "Statement",
    "TestCase",
    "TestSuite",
    "Transaction",
    "UsageRule",
    "Violation",
    "apply_rules",
    "build_kb",
    "build_pattern_index",
    "build_transactions",
    "check_test",
    "check_value",
    "derive_rules",
    "emit_suite",
    "emit_test",
    "extract_api_calls",
    "gen_random_suite",
    "gen_search_suite",
    "kb_load",
    "kb_lookup",
    "kb_merge",
    "kb_save",
    "mine_frequent_itemsets",
    "model_coverage",
    "next_method",
    "normalize_sentence",
    "parse_signature",
    "repair_sequence",
    "synth_input",
]
