"""CSV ingestion, analysis orchestration, and ranking-report emission.

Input files are UTF-8 CSV with a ``set_id,paper_id,citations[,doc_type]``
header. Reports carry a ``# citerank-i3 <version>`` leader line and fixed
6-decimal formatting for percentile-derived cells, so identical inputs
always emit byte-identical streams (timestamps never enter any payload).
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import TextIO

from ._version import __version__
from .indicator_core import (
    P100,
    CitationRecord,
    PercentileAssignment,
    PercentileRule,
    RankClassScheme,
    ReferenceScope,
    SetReport,
    compute_percentiles,
    i3,
    percent_i3,
    top_share,
)

__all__ = [
    "InputDataset",
    "AnalysisConfig",
    "RankingReport",
    "pair_key",
    "parse_records",
    "load_records",
    "run_analysis",
    "emit_ranking_table",
    "parse_ranking_table",
    "emit_paper_percentiles",
]

REQUIRED_COLUMNS = ("set_id", "paper_id", "citations")

FORMATS = ("delimited", "aligned", "json")

_LEADER = f"# citerank-i3 {__version__}"


@dataclass(frozen=True)
class InputDataset:
    """Validated citation records plus their provenance."""

    records: tuple[CitationRecord, ...]
    source_path: str = "<stream>"

    @property
    def row_count(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class AnalysisConfig:
    """Which rules, schemes, and reference scope an analysis runs under."""

    rules: tuple[PercentileRule, ...] = (PercentileRule.QUANTILE,)
    schemes: tuple[RankClassScheme, ...] = (P100,)
    scope: ReferenceScope = ReferenceScope.GLOBAL_POOL
    top_share_threshold: float = 90.0

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("at least one rule required")
        if not self.schemes:
            raise ValueError("at least one scheme required")


@dataclass(frozen=True)
class RankingReport:
    """Ordered set-level report rows for a rule/scheme grid.

    Rows are sorted by descending %I3 of the primary column (first rule,
    first scheme), ties broken by ascending set_id. ``generated_at`` is
    metadata only and never enters emitted payloads.
    """

    rows: tuple[SetReport, ...]
    rules: tuple[PercentileRule, ...]
    schemes: tuple[RankClassScheme, ...]
    scope: ReferenceScope
    generated_at: str
    top_share_threshold: float = 90.0


def pair_key(rule: PercentileRule, scheme: RankClassScheme) -> str:
    """Column label for one (rule, scheme) combination, e.g. ``quantile_p100``."""
    return f"{rule.token}_{scheme.label}"


def parse_records(stream: TextIO, source: str = "<stream>") -> InputDataset:
    """Parse a CSV stream of citation records.

    The first row must be a header containing at least the columns
    ``set_id``, ``paper_id``, and ``citations``; a ``doc_type`` column is
    optional (empty cells mean absent). Labels are whitespace-trimmed.
    Raises ``ValueError`` naming the missing column, or the offending row
    number for bad citation counts and duplicate paper_ids (the header is
    row 1).
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError(f"empty input: {source}") from None
    columns = [cell.strip() for cell in header]
    for name in REQUIRED_COLUMNS:
        if name not in columns:
            raise ValueError(f"missing required column {name!r}")
    index = {name: columns.index(name) for name in columns}
    has_doc_type = "doc_type" in index
    width = max(index[name] for name in REQUIRED_COLUMNS) + 1

    records: list[CitationRecord] = []
    first_row_of: dict[str, int] = {}
    for row_number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < width:
            raise ValueError(f"too few columns at row {row_number}")
        set_id = row[index["set_id"]].strip()
        paper_id = row[index["paper_id"]].strip()
        raw_citations = row[index["citations"]].strip()
        if not set_id:
            raise ValueError(f"empty set_id at row {row_number}")
        if not paper_id:
            raise ValueError(f"empty paper_id at row {row_number}")
        try:
            citations = int(raw_citations)
        except ValueError:
            raise ValueError(
                f"non-integer citations {raw_citations!r} at row {row_number}"
            ) from None
        if citations < 0:
            raise ValueError(f"negative citations at row {row_number}")
        if paper_id in first_row_of:
            raise ValueError(
                f"duplicate paper_id {paper_id!r} at rows "
                f"{first_row_of[paper_id]} and {row_number}"
            )
        first_row_of[paper_id] = row_number
        doc_type: str | None = None
        if has_doc_type and len(row) > index["doc_type"]:
            cell = row[index["doc_type"]].strip()
            doc_type = cell or None
        records.append(CitationRecord(set_id, paper_id, citations, doc_type))
    return InputDataset(tuple(records), source)


def load_records(path: str | Path) -> InputDataset:
    with open(path, newline="", encoding="utf-8") as handle:
        return parse_records(handle, source=str(path))


def _competition_ranks(shares: dict[str, float]) -> dict[str, int]:
    """Competition ranking on descending share; tied values share the smaller rank."""
    ordered = sorted(shares.items(), key=lambda item: (-item[1], item[0]))
    ranks: dict[str, int] = {}
    current_rank = 0
    previous: float | None = None
    for position, (set_id, value) in enumerate(ordered, start=1):
        if previous is None or value != previous:
            current_rank = position
            previous = value
        ranks[set_id] = current_rank
    return ranks


def run_analysis(dataset: InputDataset, config: AnalysisConfig) -> RankingReport:
    """Full pipeline: percentiles, per-set I3 and %I3, ranks, top-share.

    Composes :func:`compute_percentiles`, :func:`i3`, :func:`percent_i3`,
    and :func:`top_share` for every requested (rule, scheme) pair. The
    top-share column is computed under the first requested rule at
    ``config.top_share_threshold``. Deterministic for any input ordering.
    """
    records = dataset.records
    if not records:
        raise ValueError("empty input")
    assignments: dict[PercentileRule, PercentileAssignment] = {
        rule: compute_percentiles(records, rule, config.scope) for rule in config.rules
    }
    set_order = sorted({record.set_id for record in records})

    n_papers = {set_id: 0 for set_id in set_order}
    total_citations = {set_id: 0 for set_id in set_order}
    for record in records:
        n_papers[record.set_id] += 1
        total_citations[record.set_id] += record.citations

    i3_cells: dict[str, dict[str, float]] = {}
    share_cells: dict[str, dict[str, float]] = {}
    rank_cells: dict[str, dict[str, int]] = {}
    for rule in config.rules:
        for scheme in config.schemes:
            key = pair_key(rule, scheme)
            i3_by_set = {
                set_id: i3(assignments[rule], scheme, set_id) for set_id in set_order
            }
            shares = percent_i3(i3_by_set)
            i3_cells[key] = i3_by_set
            share_cells[key] = shares
            rank_cells[key] = _competition_ranks(shares)

    primary_assignment = assignments[config.rules[0]]
    top_shares = {
        set_id: top_share(primary_assignment, set_id, config.top_share_threshold)
        for set_id in set_order
    }

    rows = [
        SetReport(
            set_id=set_id,
            n_papers=n_papers[set_id],
            total_citations=total_citations[set_id],
            i3={key: cells[set_id] for key, cells in i3_cells.items()},
            percent_i3={key: cells[set_id] for key, cells in share_cells.items()},
            rank={key: cells[set_id] for key, cells in rank_cells.items()},
            top_share=top_shares[set_id],
        )
        for set_id in set_order
    ]
    primary = pair_key(config.rules[0], config.schemes[0])
    rows.sort(key=lambda row: (-row.percent_i3[primary], row.set_id))
    return RankingReport(
        rows=tuple(rows),
        rules=config.rules,
        schemes=config.schemes,
        scope=config.scope,
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        top_share_threshold=config.top_share_threshold,
    )


def _report_columns(report: RankingReport) -> list[str]:
    columns = ["set_id", "n_papers", "total_citations"]
    for rule in report.rules:
        for scheme in report.schemes:
            key = pair_key(rule, scheme)
            columns.append(f"pI3_{key}")
            columns.append(f"rank_{key}")
    columns.append("top_share")
    return columns


def _report_cells(report: RankingReport, row: SetReport) -> list[str]:
    cells = [row.set_id, str(row.n_papers), str(row.total_citations)]
    for rule in report.rules:
        for scheme in report.schemes:
            key = pair_key(rule, scheme)
            cells.append(f"{row.percent_i3[key]:.6f}")
            cells.append(str(row.rank[key]))
    cells.append(f"{row.top_share:.6f}")
    return cells


def _emit_aligned_table(title: str, columns: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    body = [list(columns)] + [list(row) for row in rows]
    widths = [max(len(line[i]) for line in body) for i in range(len(columns))]
    lines = [title, ""]
    for line in body:
        # left-align the first (label) column, right-align the numbers
        cells = [line[0].ljust(widths[0])] + [
            cell.rjust(widths[i]) for i, cell in enumerate(line) if i > 0
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def emit_ranking_table(report: RankingReport, fmt: str = "delimited") -> str:
    """Render a report as delimited CSV, an aligned text table, or JSON.

    The delimited form round-trips: :func:`parse_ranking_table` on the
    emitted stream recovers every numeric cell at 6 decimal places.
    """
    if not report.rows:
        raise ValueError("empty report")
    if fmt == "delimited":
        buffer = io.StringIO()
        buffer.write(_LEADER + "\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(_report_columns(report))
        for row in report.rows:
            writer.writerow(_report_cells(report, row))
        return buffer.getvalue()
    if fmt == "aligned":
        title = f"citerank-i3 {__version__} ranking report (scope: {report.scope.token})"
        return _emit_aligned_table(
            title, _report_columns(report), (_report_cells(report, row) for row in report.rows)
        )
    if fmt == "json":
        payload = {
            "version": __version__,
            "rules": [rule.token for rule in report.rules],
            "schemes": [scheme.label for scheme in report.schemes],
            "scope": report.scope.token,
            "top_share_threshold": report.top_share_threshold,
            "rows": [
                {
                    "set_id": row.set_id,
                    "n_papers": row.n_papers,
                    "total_citations": row.total_citations,
                    "i3": dict(row.i3),
                    "percent_i3": dict(row.percent_i3),
                    "rank": dict(row.rank),
                    "top_share": row.top_share,
                }
                for row in report.rows
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r} (expected one of: {', '.join(FORMATS)})")


def parse_ranking_table(text: str) -> list[dict[str, object]]:
    """Parse a delimited report back into typed row dicts."""
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.DictReader(lines)
    rows: list[dict[str, object]] = []
    for raw in reader:
        row: dict[str, object] = {}
        for column, cell in raw.items():
            if column in ("n_papers", "total_citations") or column.startswith("rank_"):
                row[column] = int(cell)
            elif column.startswith("pI3_") or column == "top_share":
                row[column] = float(cell)
            else:
                row[column] = cell
        rows.append(row)
    return rows


def emit_paper_percentiles(
    dataset: InputDataset,
    rules: Sequence[PercentileRule],
    scope: ReferenceScope = ReferenceScope.GLOBAL_POOL,
    fmt: str = "delimited",
) -> str:
    """Per-paper percentile table, one ``pct_<rule>`` column per rule.

    Rows are sorted by (set_id, paper_id) so equal inputs emit equal bytes.
    """
    if not dataset.records:
        raise ValueError("empty input")
    assignments = {rule: compute_percentiles(dataset.records, rule, scope) for rule in rules}
    ordered = sorted(dataset.records, key=lambda record: (record.set_id, record.paper_id))
    columns = ["set_id", "paper_id", "citations"] + [f"pct_{rule.token}" for rule in rules]

    def cells(record: CitationRecord) -> list[str]:
        row = [record.set_id, record.paper_id, str(record.citations)]
        row += [f"{assignments[rule].entries[record.paper_id]:.6f}" for rule in rules]
        return row

    if fmt == "delimited":
        buffer = io.StringIO()
        buffer.write(_LEADER + "\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in ordered:
            writer.writerow(cells(record))
        return buffer.getvalue()
    if fmt == "aligned":
        title = f"citerank-i3 {__version__} paper percentiles (scope: {scope.token})"
        return _emit_aligned_table(title, columns, (cells(record) for record in ordered))
    if fmt == "json":
        payload = {
            "version": __version__,
            "rules": [rule.token for rule in rules],
            "scope": scope.token,
            "papers": [
                {
                    "set_id": record.set_id,
                    "paper_id": record.paper_id,
                    "citations": record.citations,
                    "percentiles": {
                        rule.token: assignments[rule].entries[record.paper_id]
                        for rule in rules
                    },
                }
                for record in ordered
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r} (expected one of: {', '.join(FORMATS)})")
