"""Percentile counting rules, rank classes, and I3 aggregation.

Each paper is scored as a percentile of its citation count within a
reference group; sets are then aggregated: I3 sums percentile weights over
a set's papers, %I3 normalizes those sums across sets, and top-share is
the fraction of a set at or above a percentile threshold.

All operations are pure functions over immutable inputs and are safe to
call concurrently. Float sums go through :func:`math.fsum`, so every
aggregate is independent of record ordering.
"""

from __future__ import annotations

import math
import re
from bisect import bisect_left, bisect_right
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "CitationRecord",
    "PercentileRule",
    "ReferenceScope",
    "SchemeVariant",
    "RankClassScheme",
    "P100",
    "NSF6",
    "TOP10",
    "PercentileAssignment",
    "SetReport",
    "percentile_of",
    "compute_percentiles",
    "classify",
    "class_histogram",
    "i3",
    "percent_i3",
    "top_share",
    "oracle_percentiles",
]


class PercentileRule(Enum):
    """How a citation tally maps to a percentile within its reference group.

    QUANTILE scores the share of reference items with strictly lower
    counts. LB09 adds 0.9 to that tally, lifting the ceiling for small
    groups (a 10-item group tops out at 99 instead of 90). ROUSSEAU_RAW
    counts items at or below, so the item counts itself and the group
    maximum always scores 100. ROUSSEAU_REVISED behaves like ROUSSEAU_RAW
    except uncited items are pinned to the zeroth percentile.
    """

    QUANTILE = "quantile"
    LB09 = "lb09"
    ROUSSEAU_RAW = "rousseau-raw"
    ROUSSEAU_REVISED = "rousseau"

    @property
    def token(self) -> str:
        """Stable spelling used in CLI flags and report column names."""
        return self.value

    @classmethod
    def from_token(cls, token: str) -> PercentileRule:
        for rule in cls:
            if rule.value == token:
                return rule
        valid = ", ".join(r.value for r in cls)
        raise ValueError(f"unknown rule {token!r} (expected one of: {valid})")


class ReferenceScope(Enum):
    """Which records form the reference group a percentile is computed in.

    GLOBAL_POOL ranks every record against the whole input; PER_SET ranks
    within the owning set; the doc-type scopes group by document type,
    optionally crossed with the set.
    """

    GLOBAL_POOL = "global"
    PER_SET = "per-set"
    PER_DOC_TYPE_POOL = "per-doc-type"
    PER_SET_AND_DOC_TYPE = "per-set-and-doc-type"

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> ReferenceScope:
        for scope in cls:
            if scope.value == token:
                return scope
        valid = ", ".join(s.value for s in cls)
        raise ValueError(f"unknown scope {token!r} (expected one of: {valid})")


class SchemeVariant(Enum):
    P100 = "p100"
    NSF6 = "nsf6"
    TWO_CLASS = "two-class"


# Lower-inclusive class bounds; the top class is [99, 100].
_NSF6_BOUNDS = (0.0, 50.0, 75.0, 90.0, 95.0, 99.0)

_TOP_TOKEN = re.compile(r"^top(\d+(?:\.\d+)?)$")


@dataclass(frozen=True)
class RankClassScheme:
    """Weighting of the percentile axis for I3 aggregation.

    P100 keeps the continuous percentile as the weight. NSF6 partitions
    [0, 100] into the six classes bottom-50%, 50-75%, 75-90%, 90-95%,
    95-99%, and top-1%, weighted 1..6 from the bottom. TWO_CLASS splits at
    ``threshold`` (weights 1 and 2), the two-class form of a top-share
    excellence indicator.

    Class intervals are lower-inclusive; the top class includes 100.
    """

    variant: SchemeVariant
    threshold: float | None = None

    def __post_init__(self) -> None:
        if self.variant is SchemeVariant.TWO_CLASS:
            if self.threshold is None:
                raise ValueError("two-class scheme requires a threshold")
            if not 0.0 < self.threshold < 100.0:
                raise ValueError(f"threshold {self.threshold} outside (0, 100)")
        elif self.threshold is not None:
            raise ValueError("threshold only applies to the two-class scheme")

    @classmethod
    def p100(cls) -> RankClassScheme:
        return cls(SchemeVariant.P100)

    @classmethod
    def nsf6(cls) -> RankClassScheme:
        return cls(SchemeVariant.NSF6)

    @classmethod
    def two_class(cls, threshold: float = 90.0) -> RankClassScheme:
        return cls(SchemeVariant.TWO_CLASS, threshold)

    @classmethod
    def from_token(cls, token: str) -> RankClassScheme:
        """Parse ``p100``, ``nsf6``, or ``top<P>`` (e.g. ``top10``)."""
        if token == "p100":
            return cls.p100()
        if token == "nsf6":
            return cls.nsf6()
        match = _TOP_TOKEN.match(token)
        if match:
            return cls.two_class(100.0 - float(match.group(1)))
        raise ValueError(f"unknown scheme {token!r} (expected p100, nsf6, or top<P>)")

    @property
    def label(self) -> str:
        """Stable spelling used in CLI flags and report column names."""
        if self.variant is SchemeVariant.P100:
            return "p100"
        if self.variant is SchemeVariant.NSF6:
            return "nsf6"
        return f"top{100.0 - self.threshold:g}"

    @property
    def is_discrete(self) -> bool:
        return self.variant is not SchemeVariant.P100

    @property
    def class_count(self) -> int:
        return len(self.lower_bounds)

    @property
    def lower_bounds(self) -> tuple[float, ...]:
        """Lower-inclusive class boundaries, lowest class first."""
        if self.variant is SchemeVariant.NSF6:
            return _NSF6_BOUNDS
        if self.variant is SchemeVariant.TWO_CLASS:
            return (0.0, self.threshold)
        raise ValueError("continuous scheme has no rank classes")


P100 = RankClassScheme.p100()
NSF6 = RankClassScheme.nsf6()
TOP10 = RankClassScheme.two_class(90.0)


@dataclass(frozen=True)
class CitationRecord:
    """One document: owning set, unique id, citation count, optional type."""

    set_id: str
    paper_id: str
    citations: int
    doc_type: str | None = None

    def __post_init__(self) -> None:
        if self.citations < 0:
            raise ValueError(f"negative citations for paper {self.paper_id!r}")


@dataclass(frozen=True)
class PercentileAssignment:
    """Per-paper percentiles plus the reference group each was computed in.

    ``entries`` maps paper_id to a percentile in [0, 100]; ``group_keys``
    and ``set_ids`` record, per paper, the reference-group label used and
    the owning set. Papers with equal citation counts in the same
    reference group always hold equal percentiles.
    """

    entries: Mapping[str, float]
    group_keys: Mapping[str, str]
    set_ids: Mapping[str, str]
    rule: PercentileRule
    scope: ReferenceScope

    def percentiles_for_set(self, set_id: str) -> list[float]:
        """Percentile values of one set's papers (aggregation-order only)."""
        values = [
            value
            for paper_id, value in self.entries.items()
            if self.set_ids[paper_id] == set_id
        ]
        if not values:
            raise ValueError(f"unknown set_id {set_id!r}")
        return values


@dataclass(frozen=True)
class SetReport:
    """Per-set aggregates for one ranking-report row.

    The mapping fields are keyed by ``<rule>_<scheme>`` labels naming the
    counting rule and rank-class scheme that produced each value;
    ``rank`` holds the competition rank of the set under each column's
    descending %I3 ordering (ties share the smaller rank).
    """

    set_id: str
    n_papers: int
    total_citations: int
    i3: Mapping[str, float]
    percent_i3: Mapping[str, float]
    rank: Mapping[str, int]
    top_share: float


def _rule_value(rule: PercentileRule, lower: int, lower_or_equal: int, count: int, n: int) -> float:
    if rule is PercentileRule.QUANTILE:
        return 100.0 * lower / n
    if rule is PercentileRule.LB09:
        return 100.0 * (lower + 0.9) / n
    if rule is PercentileRule.ROUSSEAU_RAW:
        return 100.0 * lower_or_equal / n
    if count == 0:
        return 0.0
    return 100.0 * lower_or_equal / n


def percentile_of(count: int, group_counts: Iterable[int], rule: PercentileRule) -> float:
    """Percentile of one citation count within its reference group.

    Args:
        count: Citation count of the item under study; must occur in
            ``group_counts``.
        group_counts: Citation counts of the whole reference group, the
            item included.
        rule: Counting rule to apply.

    Returns:
        A percentile in [0, 100].
    """
    counts = list(group_counts)
    if not counts:
        raise ValueError("empty reference group")
    if count < 0:
        raise ValueError("negative citation count")
    if count not in counts:
        raise ValueError("item not in reference group")
    lower = sum(1 for x in counts if x < count)
    lower_or_equal = lower + counts.count(count)
    return _rule_value(rule, lower, lower_or_equal, count, len(counts))


def _group_key(record: CitationRecord, scope: ReferenceScope) -> str:
    if scope is ReferenceScope.GLOBAL_POOL:
        return "all"
    if scope is ReferenceScope.PER_SET:
        return record.set_id
    if record.doc_type is None:
        raise ValueError(
            f"record {record.paper_id!r} has no doc_type, required by scope {scope.token!r}"
        )
    if scope is ReferenceScope.PER_DOC_TYPE_POOL:
        return record.doc_type
    return f"{record.set_id}/{record.doc_type}"


def _check_unique_ids(records: list[CitationRecord]) -> None:
    seen: set[str] = set()
    for record in records:
        if record.paper_id in seen:
            raise ValueError(f"duplicate paper_id {record.paper_id!r}")
        seen.add(record.paper_id)


def compute_percentiles(
    records: Iterable[CitationRecord],
    rule: PercentileRule,
    scope: ReferenceScope = ReferenceScope.GLOBAL_POOL,
) -> PercentileAssignment:
    """Score every record as a percentile within its reference group.

    Records are partitioned into reference groups per ``scope``; each
    paper's percentile equals :func:`percentile_of` over its group's
    counts. Output is independent of input ordering.

    Args:
        records: Citation records with unique paper_ids; non-empty.
        rule: Counting rule to apply.
        scope: Reference-group partitioning; doc-type scopes require
            ``doc_type`` on every record.

    Returns:
        A :class:`PercentileAssignment` covering every input record.
    """
    recs = list(records)
    if not recs:
        raise ValueError("empty input")
    _check_unique_ids(recs)
    groups: dict[str, list[CitationRecord]] = defaultdict(list)
    for record in recs:
        groups[_group_key(record, scope)].append(record)

    entries: dict[str, float] = {}
    group_keys: dict[str, str] = {}
    set_ids: dict[str, str] = {}
    for key, members in groups.items():
        sorted_counts = sorted(m.citations for m in members)
        n = len(sorted_counts)
        for m in members:
            lower = bisect_left(sorted_counts, m.citations)
            lower_or_equal = bisect_right(sorted_counts, m.citations)
            entries[m.paper_id] = _rule_value(rule, lower, lower_or_equal, m.citations, n)
            group_keys[m.paper_id] = key
            set_ids[m.paper_id] = m.set_id
    return PercentileAssignment(entries, group_keys, set_ids, rule, scope)


def oracle_percentiles(
    records: Iterable[CitationRecord], rule: PercentileRule
) -> PercentileAssignment:
    """Quadratic pairwise-comparison reference for :func:`compute_percentiles`.

    Tallies lower / lower-or-equal items by explicit comparison against
    every group member instead of rank lookups in a sorted list. Scope is
    fixed to PER_SET. Must match :func:`compute_percentiles` exactly.
    """
    recs = list(records)
    if not recs:
        raise ValueError("empty input")
    _check_unique_ids(recs)
    by_set: dict[str, list[CitationRecord]] = defaultdict(list)
    for record in recs:
        by_set[record.set_id].append(record)

    entries: dict[str, float] = {}
    group_keys: dict[str, str] = {}
    set_ids: dict[str, str] = {}
    for set_id, members in by_set.items():
        counts = [m.citations for m in members]
        n = len(counts)
        for m in members:
            c = m.citations
            lower = sum(1 for x in counts if x < c)
            lower_or_equal = sum(1 for x in counts if x <= c)
            if rule is PercentileRule.QUANTILE:
                value = 100.0 * lower / n
            elif rule is PercentileRule.LB09:
                value = 100.0 * (lower + 0.9) / n
            elif rule is PercentileRule.ROUSSEAU_RAW:
                value = 100.0 * lower_or_equal / n
            else:
                value = 0.0 if c == 0 else 100.0 * lower_or_equal / n
            entries[m.paper_id] = value
            group_keys[m.paper_id] = set_id
            set_ids[m.paper_id] = set_id
    return PercentileAssignment(entries, group_keys, set_ids, rule, ReferenceScope.PER_SET)


def classify(percentile: float, scheme: RankClassScheme) -> float:
    """Weight of a percentile under a scheme.

    Discrete schemes return the 1-based class index (lowest class is 1);
    the continuous scheme passes the percentile through as its own weight.
    """
    if not 0.0 <= percentile <= 100.0:
        raise ValueError(f"percentile {percentile} outside [0, 100]")
    if scheme.variant is SchemeVariant.P100:
        return percentile
    return bisect_right(scheme.lower_bounds, percentile)


def class_histogram(
    assignment: PercentileAssignment, scheme: RankClassScheme, set_id: str
) -> list[int]:
    """Per-class paper counts for one set; counts sum to the set size."""
    if not scheme.is_discrete:
        raise ValueError("continuous scheme has no rank classes")
    counts = [0] * scheme.class_count
    for value in assignment.percentiles_for_set(set_id):
        counts[int(classify(value, scheme)) - 1] += 1
    return counts


def i3(assignment: PercentileAssignment, scheme: RankClassScheme, set_id: str) -> float:
    """Set-level impact: the sum of the set's percentile weights.

    Under the continuous scheme this is the plain sum of percentile
    values; under a discrete scheme each paper contributes its 1-based
    class index, i.e. the class histogram dotted with weights 1..k.
    """
    if scheme.variant is SchemeVariant.P100:
        return math.fsum(assignment.percentiles_for_set(set_id))
    histogram = class_histogram(assignment, scheme, set_id)
    return float(sum((index + 1) * count for index, count in enumerate(histogram)))


def percent_i3(i3_by_set: Mapping[str, float]) -> dict[str, float]:
    """Express each set's I3 as a percentage of the summed I3 over all sets."""
    if not i3_by_set:
        raise ValueError("no sets")
    for set_id, value in i3_by_set.items():
        if value < 0:
            raise ValueError(f"negative I3 for set {set_id!r}")
    total = math.fsum(i3_by_set.values())
    if total == 0.0:
        raise ValueError("degenerate pool: total I3 is zero")
    return {set_id: 100.0 * value / total for set_id, value in i3_by_set.items()}


def top_share(
    assignment: PercentileAssignment, set_id: str, threshold: float = 90.0
) -> float:
    """Fraction of a set's papers at or above the percentile threshold."""
    values = assignment.percentiles_for_set(set_id)
    return sum(1 for value in values if value >= threshold) / len(values)
