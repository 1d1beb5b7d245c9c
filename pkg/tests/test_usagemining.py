"""Transaction building and Apriori mining against a brute-force oracle."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apiknow.model import ValidationError
from apiknow.usagemining import (
    Transaction,
    UsageRule,
    build_pattern_index,
    build_transactions,
    derive_rules,
    extract_api_calls,
    mine_frequent_itemsets,
    mine_usage_patterns,
    read_patterns,
    read_transactions,
    write_patterns,
    write_transactions,
)

# ---------------------------------------------------------------------------
# brute-force oracle


def brute_force_itemsets(transactions, min_support):
    """Enumerate every subset of the item universe and count containment."""
    universe = sorted({api for t in transactions for api in t.apis})
    baskets = [frozenset(t.apis) for t in transactions]
    out = {}
    for k in range(1, len(universe) + 1):
        for combo in combinations(universe, k):
            itemset = frozenset(combo)
            count = sum(1 for b in baskets if itemset <= b)
            if count >= min_support:
                out[itemset] = count
    return out


def brute_force_rules(transactions, min_support, min_confidence):
    itemsets = brute_force_itemsets(transactions, min_support)
    rules = []
    for itemset, support in itemsets.items():
        if len(itemset) < 2:
            continue
        for consequent in itemset:
            antecedent = itemset - {consequent}
            confidence = Fraction(support, itemsets[antecedent])
            if confidence >= Fraction(min_confidence):
                rules.append(UsageRule(antecedent, consequent, support, confidence))
    rules.sort(key=UsageRule.sort_key)
    return rules


def make_transactions(rows):
    return [Transaction(f"p{i}", tuple(apis)) for i, apis in enumerate(rows)]


# ---------------------------------------------------------------------------
# extraction


class TestExtractApiCalls:
    KNOWN = {"kmlib.cluster.KMeans", "kmlib.cluster.KMeans.fit", "kmlib.cluster.KMeans.predict"}

    def test_call_order_preserved(self):
        code = (
            "from kmlib.cluster import KMeans\n"
            "kmeans = KMeans(n_clusters=2).fit(X)\n"
            "kmeans.predict([[0, 0]])\n"
        )
        assert extract_api_calls(code, self.KNOWN) == [
            "kmlib.cluster.KMeans",
            "kmlib.cluster.KMeans.fit",
            "kmlib.cluster.KMeans.predict",
        ]

    def test_empty_fragment(self):
        assert extract_api_calls("", self.KNOWN) == []

    def test_unknown_calls_dropped(self):
        assert extract_api_calls("helper(1)\nprint(x)", self.KNOWN) == []

    def test_duplicates_kept_in_extraction(self):
        code = "m.fit(a)\nm.fit(b)\n"
        assert extract_api_calls(code, self.KNOWN) == ["kmlib.cluster.KMeans.fit"] * 2

    def test_import_alias_resolution(self):
        code = "import kmlib.cluster as kc\nkc.KMeans(2)\n"
        assert extract_api_calls(code, self.KNOWN) == ["kmlib.cluster.KMeans"]

    def test_requires_known_set(self):
        with pytest.raises(ValueError):
            extract_api_calls("f()", set())


class TestBuildTransactions:
    KNOWN = {"A.KMeans", "A.KMeans.fit", "A.KMeans.predict"}

    def test_concatenate_and_dedup(self):
        posts = [("post1", ["KMeans(1)\nfit(x)", "fit(y)\npredict(z)"])]
        out = build_transactions(posts, self.KNOWN)
        assert len(out) == 1
        assert out[0].apis == ("A.KMeans", "A.KMeans.fit", "A.KMeans.predict")

    def test_post_without_known_calls_dropped(self):
        posts = [("post1", ["helper()"]), ("post2", ["fit(x)"])]
        out = build_transactions(posts, self.KNOWN)
        assert [t.source_id for t in out] == ["post2"]

    def test_at_most_one_transaction_per_post(self):
        posts = [(f"p{i}", ["fit(x)"]) for i in range(3)]
        assert len(build_transactions(posts, self.KNOWN)) <= 3


# ---------------------------------------------------------------------------
# mining


class TestMineFrequentItemsets:
    def test_empty(self):
        assert mine_frequent_itemsets([], 2) == {}

    def test_derived_three_transaction_fixture(self):
        tx = make_transactions([("A", "B"), ("A", "B", "C"), ("A", "C")])
        expected = brute_force_itemsets(tx, 2)
        assert expected == {
            frozenset("A"): 3,
            frozenset("B"): 2,
            frozenset("C"): 2,
            frozenset(("A", "B")): 2,
            frozenset(("A", "C")): 2,
        }
        assert mine_frequent_itemsets(tx, 2) == expected

    def test_single_transaction_below_support(self):
        tx = make_transactions([("A", "B")])
        assert mine_frequent_itemsets(tx, 2) == {}

    def test_min_support_validation(self):
        with pytest.raises(ValueError):
            mine_frequent_itemsets([], 0)

    def test_anti_monotone_support(self):
        rng = random.Random(3)
        items = "ABCDEF"
        tx = make_transactions(
            [tuple(rng.sample(items, rng.randint(1, 6))) for _ in range(10)]
        )
        freq = mine_frequent_itemsets(tx, 2)
        for itemset, count in freq.items():
            for item in itemset:
                if len(itemset) > 1:
                    sub = itemset - {item}
                    assert sub in freq and freq[sub] >= count


class TestDeriveRules:
    def test_derived_rules_from_fixture(self):
        tx = make_transactions([("A", "B"), ("A", "B", "C"), ("A", "C")])
        rules = derive_rules(mine_frequent_itemsets(tx, 2), 0.5)
        as_tuples = {(tuple(sorted(r.antecedent)), r.consequent, r.support_count, r.confidence) for r in rules}
        assert (("B",), "A", 2, Fraction(1)) in as_tuples
        assert (("C",), "A", 2, Fraction(1)) in as_tuples
        assert (("A",), "B", 2, Fraction(2, 3)) in as_tuples
        assert (("A",), "C", 2, Fraction(2, 3)) in as_tuples
        assert rules == brute_force_rules(tx, 2, 0.5)

    def test_full_confidence_threshold(self):
        tx = make_transactions([("A", "B"), ("A", "B", "C"), ("A", "C")])
        rules = derive_rules(mine_frequent_itemsets(tx, 2), 1.0)
        assert {(tuple(sorted(r.antecedent)), r.consequent) for r in rules} == {
            (("B",), "A"),
            (("C",), "A"),
        }
        assert rules == brute_force_rules(tx, 2, 1.0)

    def test_empty_itemsets(self):
        assert derive_rules({}, 0.5) == []

    def test_monotonicity_in_thresholds(self):
        rng = random.Random(11)
        tx = make_transactions(
            [tuple(rng.sample("ABCDE", rng.randint(1, 5))) for _ in range(8)]
        )
        base_sets = set(mine_frequent_itemsets(tx, 2))
        higher_sets = set(mine_frequent_itemsets(tx, 3))
        assert higher_sets <= base_sets
        base_rules = {
            (tuple(sorted(r.antecedent)), r.consequent)
            for r in derive_rules(mine_frequent_itemsets(tx, 2), 0.5)
        }
        stricter = {
            (tuple(sorted(r.antecedent)), r.consequent)
            for r in derive_rules(mine_frequent_itemsets(tx, 2), 0.8)
        }
        assert stricter <= base_rules


@settings(max_examples=120, deadline=None)
@given(
    st.lists(
        st.lists(st.sampled_from("ABCDEF"), min_size=1, max_size=6, unique=True),
        min_size=0,
        max_size=10,
    ),
    st.integers(1, 4),
    st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]),
)
def test_oracle_equivalence_property(rows, min_support, min_confidence):
    tx = make_transactions([tuple(r) for r in rows])
    assert mine_frequent_itemsets(tx, min_support) == brute_force_itemsets(tx, min_support)
    got = derive_rules(mine_frequent_itemsets(tx, min_support), min_confidence)
    assert got == brute_force_rules(tx, min_support, min_confidence)


def test_order_insensitive_mining():
    rows = [("A", "B", "C"), ("B", "A"), ("C", "A"), ("B", "C", "A")]
    tx1 = make_transactions(rows)
    tx2 = make_transactions([tuple(reversed(r)) for r in reversed(rows)])
    idx1 = build_pattern_index(mine_usage_patterns(tx1))
    idx2 = build_pattern_index(mine_usage_patterns(tx2))
    assert idx1.all_rules() == idx2.all_rules()


# ---------------------------------------------------------------------------
# pattern index


class TestPatternIndex:
    def test_sorted_by_confidence(self):
        rules = [
            UsageRule(frozenset("X"), "Z", 3, Fraction(3, 5)),
            UsageRule(frozenset("X"), "Y", 3, Fraction(9, 10)),
        ]
        index = build_pattern_index(rules)
        assert [r.consequent for r in index.consequents({"X"})] == ["Y", "Z"]

    def test_tie_breaks_by_support_then_name(self):
        rules = [
            UsageRule(frozenset("X"), "B", 2, Fraction(1, 2)),
            UsageRule(frozenset("X"), "A", 5, Fraction(1, 2)),
            UsageRule(frozenset("X"), "C", 5, Fraction(1, 2)),
        ]
        index = build_pattern_index(rules)
        assert [r.consequent for r in index.consequents({"X"})] == ["A", "C", "B"]

    def test_empty(self):
        index = build_pattern_index([])
        assert index.is_empty()
        assert index.consequents({"X"}) == []


# ---------------------------------------------------------------------------
# file formats


class TestFiles:
    def test_transactions_round_trip(self, tmp_path):
        tx = make_transactions([("A.f", "A.g"), ("A.g",)])
        path = tmp_path / "tx.tsv"
        write_transactions(tx, str(path))
        assert read_transactions(str(path)) == tx

    def test_malformed_transaction_line(self, tmp_path):
        path = tmp_path / "tx.tsv"
        path.write_text("p1\tA,B\nno-tab-here\n")
        with pytest.raises(ValidationError, match=":2"):
            read_transactions(str(path))

    def test_patterns_round_trip(self, tmp_path):
        tx = make_transactions([("A", "B"), ("A", "B", "C"), ("A", "C")])
        rules = mine_usage_patterns(tx)
        path = tmp_path / "patterns.jsonl"
        write_patterns(rules, str(path))
        assert read_patterns(str(path)) == rules

    def test_patterns_file_deterministic(self, tmp_path):
        tx = make_transactions([("A", "B"), ("A", "B", "C"), ("A", "C")])
        rules = mine_usage_patterns(tx)
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_patterns(rules, str(p1))
        write_patterns(list(reversed(rules)), str(p2))
        assert p1.read_bytes() == p2.read_bytes()
