"""The fixture library itself: behavior, validation branches, metadata."""

from __future__ import annotations

import json
import os

import pytest

import fixtureml
from fixtureml.cluster import KMeans
from fixtureml.data import make_blobs
from fixtureml.metrics import accuracy_score, mean_squared_error
from fixtureml.model_selection import train_test_split
from fixtureml.preprocessing import StandardScaler

DOCS_DIR = os.path.join(os.path.dirname(fixtureml.__file__), "docs")


class TestKMeans:
    def test_fit_predict_round_trip(self):
        X = [[1.0, 2.0], [1.0, 4.0], [10.0, 2.0], [10.0, 4.0]]
        model = KMeans(n_clusters=2).fit(X)
        labels = model.predict(X)
        assert len(labels) == 4
        assert labels[0] == labels[1]
        assert labels[2] == labels[3]
        assert labels[0] != labels[2]

    def test_deterministic(self):
        X = make_blobs(n_samples=12, n_features=2, centers=3)
        a = KMeans(n_clusters=3).fit(X).predict(X)
        b = KMeans(n_clusters=3).fit(X).predict(X)
        assert a == b

    def test_sample_weight_length_check(self):
        with pytest.raises(ValueError, match="length"):
            KMeans(n_clusters=1).fit([[1, 2]], sample_weight=[1.0, 2.0])

    @pytest.mark.parametrize(
        "bad,exc",
        [
            ("rows", TypeError),
            ([], ValueError),
            ([[1, "x"]], TypeError),
            ([[1, 2], [3]], ValueError),
            ([[True]], TypeError),
        ],
    )
    def test_matrix_validation(self, bad, exc):
        with pytest.raises(exc):
            KMeans(n_clusters=1).fit(bad)

    def test_predict_requires_fit(self):
        with pytest.raises(RuntimeError, match="fit"):
            KMeans().predict([[1, 2]])

    def test_predict_width_check(self):
        model = KMeans(n_clusters=1).fit([[1, 2]])
        with pytest.raises(ValueError, match="width"):
            model.predict([[1, 2, 3]])

    def test_constructor_validation(self):
        with pytest.raises(TypeError):
            KMeans(n_clusters="many")
        with pytest.raises(ValueError):
            KMeans(n_clusters=0)
        with pytest.raises(TypeError):
            KMeans(tol="tight")


class TestScaler:
    def test_standardizes_columns(self):
        X = [[0.0, 10.0], [2.0, 14.0]]
        out = StandardScaler().fit_transform(X)
        for j in range(2):
            column = [row[j] for row in out]
            assert sum(column) == pytest.approx(0.0)

    def test_transform_requires_fit(self):
        with pytest.raises(RuntimeError):
            StandardScaler().transform([[1.0]])

    def test_flag_validation(self):
        with pytest.raises(TypeError):
            StandardScaler(with_mean="yes")


class TestSplitAndMetrics:
    def test_split_sizes(self):
        X = [[float(i), 0.0] for i in range(8)]
        train, test = train_test_split(X, test_size=0.25)
        assert len(test) == 2
        assert len(train) == 6

    def test_split_deterministic(self):
        X = [[float(i)] for i in range(10)]
        assert train_test_split(X, random_state=3) == train_test_split(X, random_state=3)

    def test_split_validation(self):
        with pytest.raises(ValueError):
            train_test_split([[1.0]], test_size=2.0)

    def test_accuracy(self):
        assert accuracy_score([1, 0, 1], [1, 1, 1]) == pytest.approx(2 / 3)
        with pytest.raises(TypeError):
            accuracy_score([1.5], [1])

    def test_mse(self):
        assert mean_squared_error([0.0, 2.0], [0.0, 0.0]) == pytest.approx(2.0)
        assert mean_squared_error([0.0, 2.0], [0.0, 0.0], squared=False) == pytest.approx(2.0 ** 0.5)

    def test_make_blobs_shape_and_determinism(self):
        rows = make_blobs(n_samples=6, n_features=3, centers=2, random_state=1)
        assert len(rows) == 6
        assert all(len(r) == 3 for r in rows)
        assert rows == make_blobs(n_samples=6, n_features=3, centers=2, random_state=1)


class TestShippedMetadata:
    def records(self):
        path = os.path.join(DOCS_DIR, "records.jsonl")
        return [json.loads(line) for line in open(path, encoding="utf-8") if line.strip()]

    def test_doc_records_follow_corpus_schema(self):
        records = self.records()
        assert len(records) >= 10
        for record in records:
            assert record["api_id"].startswith("fixtureml.")
            assert "(" in record["signature"]
            assert isinstance(record.get("params", {}), dict)

    def test_ground_truth_covers_every_documented_parameter(self):
        truth = json.load(open(os.path.join(DOCS_DIR, "ground_truth.json"), encoding="utf-8"))
        for record in self.records():
            assert record["api_id"] in truth, record["api_id"]
            labeled = truth[record["api_id"]]
            signature_params = record["signature"].split("(", 1)[1].rstrip(")").split(",")
            names = [p.split("=")[0].strip() for p in signature_params if p.strip()]
            assert sorted(labeled) == sorted(names), record["api_id"]

    def test_ground_truth_defaults_match_the_code(self):
        truth = json.load(open(os.path.join(DOCS_DIR, "ground_truth.json"), encoding="utf-8"))
        assert truth["fixtureml.cluster.KMeans"]["n_clusters"]["default"] == KMeans().n_clusters
        assert truth["fixtureml.model_selection.train_test_split"]["test_size"]["default"] == 0.25
