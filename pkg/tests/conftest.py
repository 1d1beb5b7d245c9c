"""Shared fixtures: a small KMeans-flavored documentation corpus.

The fit record reproduces the running three-source example (signature,
parametric page, example code); the rest give the generator a module worth
of constructors, methods, and a free function to sequence.
"""

from __future__ import annotations

import pytest

from apiknow.docmining import DocRecord, build_kb
from apiknow.model import KbEntry, KnowledgeBase, ParamConstraint
from apiknow.usagemining import PatternIndex, Transaction, mine_usage_patterns

KMEANS_EXAMPLE = """\
from kmlib.cluster import KMeans
X = [[1, 2], [1, 4]]
kmeans = KMeans(n_clusters=2, random_state=0).fit(X, sample_weight=[0.5, 1.0])
kmeans.predict([[0, 0], [12, 3]])
"""

SCALER_EXAMPLE = """\
from kmlib.preprocessing import StandardScaler
scaler = StandardScaler()
scaler.fit_transform([[0.0, 1.5], [2.5, 3.0]])
"""


def corpus_records() -> list[DocRecord]:
    return [
        DocRecord(
            "kmlib.cluster.KMeans",
            "KMeans(n_clusters=8, max_iter=300, random_state=None)",
            {
                "n_clusters": "int, default=8",
                "max_iter": "int, default=300",
                "random_state": "int, default=0",
            },
        ),
        DocRecord(
            "kmlib.cluster.KMeans.fit",
            "fit(X, y=None, sample_weight=None)",
            {
                "X": "array-like of shape (n,n)",
                "y": "Not used, present for API consistency by convention.",
                "sample_weight": "array-like of shape (n,), default=None",
            },
            example_code=KMEANS_EXAMPLE,
        ),
        DocRecord(
            "kmlib.cluster.KMeans.predict",
            "predict(X)",
            {"X": "array-like of shape (n,n)"},
        ),
        DocRecord(
            "kmlib.preprocessing.StandardScaler",
            "StandardScaler(with_mean=True, with_std=True)",
            {"with_mean": "bool, default=True", "with_std": "bool, default=True"},
        ),
        DocRecord(
            "kmlib.preprocessing.StandardScaler.fit_transform",
            "fit_transform(X)",
            {"X": "2d Array"},
            example_code=SCALER_EXAMPLE,
        ),
        DocRecord(
            "kmlib.cluster.split_data",
            "split_data(X, ratio=0.25)",
            {"X": "array-like of shape (n,n)", "ratio": "float, default=0.25"},
        ),
    ]


FIT_ID = "kmlib.cluster.KMeans.fit"
PREDICT_ID = "kmlib.cluster.KMeans.predict"
KMEANS_ID = "kmlib.cluster.KMeans"
SPLIT_ID = "kmlib.cluster.split_data"


def fixture_transactions() -> list[Transaction]:
    rows = [
        ("post1", (KMEANS_ID, FIT_ID, PREDICT_ID)),
        ("post2", (KMEANS_ID, FIT_ID, PREDICT_ID)),
        ("post3", (KMEANS_ID, FIT_ID)),
        ("post4", (SPLIT_ID, KMEANS_ID, FIT_ID, PREDICT_ID)),
        ("post5", (KMEANS_ID, FIT_ID, PREDICT_ID)),
    ]
    return [Transaction(s, apis) for s, apis in rows]


def strip_knowledge(kb: KnowledgeBase) -> KnowledgeBase:
    """Signatures kept, mined constraint fields dropped (knowledge-blind)."""
    entries = {}
    for api_id, entry in kb.entries.items():
        constraints = {
            p.name: ParamConstraint(
                optional=not p.is_required, provenance={"optional": "signature"}
            )
            for p in entry.spec.params
            if not p.is_varargs
        }
        entries[api_id] = KbEntry(entry.spec, constraints)
    return KnowledgeBase(kb.framework, kb.version, entries, {})


@pytest.fixture(scope="session")
def fixture_kb() -> KnowledgeBase:
    return build_kb(corpus_records(), framework="kmlib")


@pytest.fixture(scope="session")
def blind_kb(fixture_kb) -> KnowledgeBase:
    return strip_knowledge(fixture_kb)


@pytest.fixture(scope="session")
def fixture_patterns() -> PatternIndex:
    return PatternIndex(mine_usage_patterns(fixture_transactions()))


@pytest.fixture()
def empty_patterns() -> PatternIndex:
    return PatternIndex()
