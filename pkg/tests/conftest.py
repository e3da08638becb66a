from __future__ import annotations

import pytest

from citerank import CitationRecord


def make_records(counts, set_id="A", prefix=None, doc_type=None):
    """Build one set's records from a list of citation counts."""
    prefix = prefix if prefix is not None else set_id.lower()
    return [
        CitationRecord(set_id, f"{prefix}{i}", count, doc_type)
        for i, count in enumerate(counts)
    ]


@pytest.fixture
def worked_set():
    """The 5-paper micro-set with counts {0, 1, 1, 2, 5}."""
    return make_records([0, 1, 1, 2, 5])


@pytest.fixture
def ten_reviews():
    """One 10-paper set with counts 0..9."""
    return make_records(range(10), set_id="reviews", prefix="r")
