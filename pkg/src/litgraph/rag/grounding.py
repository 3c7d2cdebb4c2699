"""Deterministic citation-grounding checks.

A cheap, reproducible stand-in for judge-based faithfulness scoring:
markers must point inside the retrieved set, and coverage counts the
fraction of sentences that cite anything at all.
"""

from __future__ import annotations

import re

from .context import split_sentences
from .types import GroundedAnswer, GroundingReport

_MARKER_RE = re.compile(r"\[(\d+)\]")


def parse_markers(text: str) -> list[int]:
    """All [n] citation markers in order of appearance."""
    return [int(m) for m in _MARKER_RE.findall(text)]


def markers_valid(text: str, n_docs: int) -> bool:
    return all(1 <= m <= n_docs for m in parse_markers(text))


def grounding_check(answer: GroundedAnswer, n_docs: int | None = None) -> GroundingReport:
    """Validate markers against the retrieved-set size and measure how
    many sentences carry at least one citation. An empty answer is
    vacuously valid with zero coverage."""
    if n_docs is None:
        n_docs = len(answer.citations)
    sentences = split_sentences(answer.text)
    if not sentences:
        return GroundingReport(markers_valid=True, citation_coverage=0.0)
    cited = sum(1 for s in sentences if _MARKER_RE.search(s))
    return GroundingReport(
        markers_valid=markers_valid(answer.text, n_docs),
        citation_coverage=cited / len(sentences),
    )
