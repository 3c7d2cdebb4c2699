"""Result types for the grounded-answer pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SupportStatement:
    section: str
    page: int
    statement: str


@dataclass(frozen=True)
class GroundedAnswer:
    """Answer text with inline [n] citation markers.

    `citations` maps every marker appearing in the text to the cited
    publication id; `supports` carries section/page evidence for
    single-paper answers.
    """

    text: str
    citations: dict[int, str] = field(default_factory=dict)
    supports: tuple[SupportStatement, ...] = ()


@dataclass(frozen=True)
class AskPaperResult:
    answer: GroundedAnswer
    followups: tuple[str, str, str]


@dataclass(frozen=True)
class GroundingReport:
    markers_valid: bool
    citation_coverage: float  # fraction of sentences carrying >= 1 marker
