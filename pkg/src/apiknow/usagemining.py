"""Builds API-call transactions from code fragments and mines usage rules.

Each corpus source (one Q&A post) becomes one transaction: the known APIs
its fragments call, deduplicated keeping first occurrence. Apriori mines
frequent itemsets over the transactions and association rules with a single
consequent; confidences are exact rationals.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .docmining import _CALL_RE, _FROM_IMPORT_RE, _IMPORT_RE, _logical_lines
from .model import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Transaction:
    """The ordered, deduplicated known-API calls of one corpus source."""

    source_id: str
    apis: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.apis:
            raise ValidationError(f"transaction {self.source_id!r} has no APIs")
        if len(set(self.apis)) != len(self.apis):
            raise ValidationError(f"transaction {self.source_id!r} has duplicate APIs")


@dataclass(frozen=True)
class UsageRule:
    """Association rule {antecedent} => consequent with exact confidence."""

    antecedent: frozenset
    consequent: str
    support_count: int
    confidence: Fraction

    def __post_init__(self) -> None:
        if not self.antecedent:
            raise ValidationError("rule with empty antecedent")
        if self.consequent in self.antecedent:
            raise ValidationError("rule consequent inside antecedent")
        if not (0 < self.confidence <= 1):
            raise ValidationError(f"confidence {self.confidence} outside (0,1]")

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.antecedent)), self.consequent)


class PatternIndex:
    """Rules keyed by antecedent set; consequents ranked by confidence.

    Ties break by higher support, then lexical api id, giving a stable total
    order.
    """

    def __init__(self, rules: list[UsageRule] | None = None):
        self._by_antecedent: dict = {}
        for rule in rules or ():
            self._by_antecedent.setdefault(rule.antecedent, []).append(rule)
        for key in self._by_antecedent:
            self._by_antecedent[key].sort(
                key=lambda r: (-r.confidence, -r.support_count, r.consequent)
            )

    def __len__(self) -> int:
        return sum(len(v) for v in self._by_antecedent.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PatternIndex):
            return NotImplemented
        return self._by_antecedent == other._by_antecedent

    def consequents(self, antecedent: frozenset | set) -> list[UsageRule]:
        """Rules whose antecedent equals the given API set, ranked."""
        return list(self._by_antecedent.get(frozenset(antecedent), ()))

    def rule_for(self, antecedent: frozenset | set, consequent: str) -> UsageRule | None:
        for rule in self._by_antecedent.get(frozenset(antecedent), ()):
            if rule.consequent == consequent:
                return rule
        return None

    def all_rules(self) -> list[UsageRule]:
        rules = [r for group in self._by_antecedent.values() for r in group]
        return sorted(rules, key=UsageRule.sort_key)

    def is_empty(self) -> bool:
        return not self._by_antecedent


# ---------------------------------------------------------------------------
# extraction from code fragments


def extract_api_calls(code_text: str, known: set[str] | dict) -> list[str]:
    """Known APIs called in a fragment, in textual order, duplicates kept.

    Dotted receivers resolve by suffix then simple-name match against the
    known set; `import x as y` aliases within the fragment are honored.
    Malformed fragments are scanned best effort.
    """
    if not known:
        raise ValueError("known API set must be nonempty")
    known_ids = set(known)
    by_simple: dict = {}
    for api_id in sorted(known_ids):
        by_simple.setdefault(api_id.rsplit(".", 1)[-1], api_id)
    aliases: dict = {}
    calls: list[str] = []
    for line in _logical_lines(code_text):
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
            name = call.group("name").lstrip(".")
            dotted = name
            head = dotted.split(".", 1)
            if head[0] in aliases:
                dotted = aliases[head[0]] + ("." + head[1] if len(head) > 1 else "")
            if dotted in known_ids:
                calls.append(dotted)
                continue
            suffixed = sorted(a for a in known_ids if a.endswith("." + dotted))
            if suffixed:
                calls.append(suffixed[0])
                continue
            simple = by_simple.get(dotted.rsplit(".", 1)[-1])
            if simple is not None:
                calls.append(simple)
    return calls


def build_transactions(
    posts: list[tuple[str, list[str]]], known: set[str] | dict
) -> list[Transaction]:
    """One transaction per source: concatenated calls, first-occurrence dedup.

    Sources with no known calls are dropped.
    """
    transactions: list[Transaction] = []
    for source_id, fragments in posts:
        seen: list[str] = []
        for fragment in fragments:
            for api in extract_api_calls(fragment, known):
                if api not in seen:
                    seen.append(api)
        if seen:
            transactions.append(Transaction(source_id, tuple(seen)))
    return transactions


# ---------------------------------------------------------------------------
# Apriori


def mine_frequent_itemsets(
    transactions: list[Transaction], min_support: int
) -> dict[frozenset, int]:
    """All itemsets contained in at least ``min_support`` transactions.

    Classic level-wise generation: candidates of size k join frequent
    (k-1)-itemsets and are pruned unless every (k-1)-subset is frequent.
    """
    if min_support < 1:
        raise ValueError(f"min_support must be >= 1, got {min_support}")
    baskets = [frozenset(t.apis) for t in transactions]
    counts: dict[frozenset, int] = {}
    singles: dict[frozenset, int] = {}
    for basket in baskets:
        for item in basket:
            key = frozenset((item,))
            singles[key] = singles.get(key, 0) + 1
    level = {s: c for s, c in singles.items() if c >= min_support}
    counts.update(level)
    k = 2
    while level:
        frequent_prev = set(level)
        candidates: set[frozenset] = set()
        for a, b in combinations(sorted(frequent_prev, key=sorted), 2):
            union = a | b
            if len(union) != k:
                continue
            if all(frozenset(sub) in frequent_prev for sub in combinations(sorted(union), k - 1)):
                candidates.add(union)
        level = {}
        for candidate in candidates:
            count = sum(1 for basket in baskets if candidate <= basket)
            if count >= min_support:
                level[candidate] = count
        counts.update(level)
        k += 1
    return counts


def derive_rules(
    itemsets: dict[frozenset, int], min_confidence: float | Fraction
) -> list[UsageRule]:
    """Single-consequent rules meeting the confidence threshold.

    Confidence is computed as an exact rational before thresholding.
    """
    threshold = Fraction(min_confidence) if not isinstance(min_confidence, Fraction) else min_confidence
    rules: list[UsageRule] = []
    for itemset in itemsets:
        if len(itemset) < 2:
            continue
        support = itemsets[itemset]
        for consequent in itemset:
            antecedent = itemset - {consequent}
            base = itemsets.get(antecedent)
            if base is None:
                continue
            confidence = Fraction(support, base)
            if confidence >= threshold:
                rules.append(UsageRule(antecedent, consequent, support, confidence))
    rules.sort(key=UsageRule.sort_key)
    return rules


def mine_usage_patterns(
    transactions: list[Transaction],
    min_support: int = 2,
    min_confidence: float | Fraction = Fraction(1, 2),
) -> list[UsageRule]:
    """Frequent itemsets then rules, with the default thresholds (2, 50%)."""
    itemsets = mine_frequent_itemsets(transactions, min_support)
    return derive_rules(itemsets, min_confidence)


def build_pattern_index(rules: list[UsageRule]) -> PatternIndex:
    return PatternIndex(rules)


# ---------------------------------------------------------------------------
# file formats

_TRANSACTION_LINE = re.compile(r"^(?P<source>[^\t]+)\t(?P<apis>.+)$")


def read_transactions(path: str) -> list[Transaction]:
    """Transactions file: one per line, ``source_id<TAB>api1,api2,...``."""
    transactions: list[Transaction] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            m = _TRANSACTION_LINE.match(line)
            if not m:
                raise ValidationError(f"{path}:{lineno}: malformed transaction line")
            apis = tuple(a.strip() for a in m.group("apis").split(",") if a.strip())
            if not apis:
                raise ValidationError(f"{path}:{lineno}: transaction with no APIs")
            deduped: list[str] = []
            for api in apis:
                if api not in deduped:
                    deduped.append(api)
            transactions.append(Transaction(m.group("source"), tuple(deduped)))
    return transactions


def write_transactions(transactions: list[Transaction], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in transactions:
            fh.write(f"{t.source_id}\t{','.join(t.apis)}\n")


def write_patterns(rules: list[UsageRule], path: str) -> None:
    """Patterns file: one JSON record per rule, sorted for determinism."""
    with open(path, "w", encoding="utf-8") as fh:
        for rule in sorted(rules, key=UsageRule.sort_key):
            record = {
                "antecedent": sorted(rule.antecedent),
                "consequent": rule.consequent,
                "support": rule.support_count,
                "confidence": [rule.confidence.numerator, rule.confidence.denominator],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_patterns(path: str) -> list[UsageRule]:
    rules: list[UsageRule] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                num, den = obj["confidence"]
                rules.append(
                    UsageRule(
                        antecedent=frozenset(obj["antecedent"]),
                        consequent=obj["consequent"],
                        support_count=obj["support"],
                        confidence=Fraction(num, den),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"{path}:{lineno}: malformed pattern record: {exc}") from exc
    return rules
