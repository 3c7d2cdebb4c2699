"""Navigation, relation, and grounding metrics.

The navigation error is the mean absolute fraction of extra steps taken
over the ideal shortest click path; relation judgments aggregate into
precision/recall/F1; grounding reports roll up the per-answer citation
checks across persisted chat sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyTraces, ParseError, ZeroIdeal
from .kgstore import _iter_jsonl
from .rag.grounding import grounding_check
from .rag.sessions import ChatSession
from .rag.types import GroundedAnswer

CORRECT = "correct"
INCORRECT = "incorrect"
MISSING = "missing"


@dataclass(frozen=True)
class NavigationTrace:
    target: str
    total_steps: int
    ideal_steps: int

    def __post_init__(self):
        if self.total_steps < 1:
            raise ValueError("total_steps must be >= 1")
        if self.ideal_steps < 0:
            raise ValueError("ideal_steps must be >= 0")


@dataclass(frozen=True)
class RelationJudgment:
    child: str
    parent: str
    verdict: str  # correct | incorrect | missing

    def __post_init__(self):
        if self.verdict not in (CORRECT, INCORRECT, MISSING):
            raise ValueError(f"bad verdict: {self.verdict}")


def mape(traces: Sequence[NavigationTrace]) -> float:
    """Mean of |total - ideal| / ideal over all traces. Shortcuts through
    multi-parent nodes can make total < ideal; the absolute value keeps
    those traces well-defined."""
    if not traces:
        raise EmptyTraces("no navigation traces")
    for t in traces:
        if t.ideal_steps == 0:
            raise ZeroIdeal(f"trace for {t.target} has ideal_steps 0")
    return sum(
        abs(t.total_steps - t.ideal_steps) / t.ideal_steps for t in traces
    ) / len(traces)


@dataclass(frozen=True)
class PrfReport:
    precision: float
    recall: float
    f1: float
    degenerate: bool  # a denominator was zero and was reported as 0.0


def relation_prf(judgments: Sequence[RelationJudgment]) -> PrfReport:
    """Precision = correct/(correct+incorrect), recall =
    correct/(correct+missing), F1 their harmonic mean. Zero denominators
    yield 0.0 with the degenerate flag set instead of raising, so batch
    reports never abort."""
    if not judgments:
        raise EmptyTraces("no relation judgments")
    correct = sum(1 for j in judgments if j.verdict == CORRECT)
    incorrect = sum(1 for j in judgments if j.verdict == INCORRECT)
    missing = sum(1 for j in judgments if j.verdict == MISSING)
    degenerate = False
    if correct + incorrect == 0:
        precision, degenerate = 0.0, True
    else:
        precision = correct / (correct + incorrect)
    if correct + missing == 0:
        recall, degenerate = 0.0, True
    else:
        recall = correct / (correct + missing)
    if precision + recall == 0:
        f1, degenerate = 0.0, True
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return PrfReport(precision=precision, recall=recall, f1=f1, degenerate=degenerate)


@dataclass(frozen=True)
class GroundingSummary:
    mean_coverage: float
    valid_fraction: float  # share of assistant messages with in-range markers
    n_messages: int


def grounding_report(sessions: Iterable[ChatSession]) -> GroundingSummary:
    """Aggregate grounding checks over every assistant message of the
    given sessions."""
    coverages: list[float] = []
    valid = 0
    for session in sessions:
        for msg in session.messages:
            if msg.role != "assistant":
                continue
            answer = GroundedAnswer(text=msg.content, citations=msg.citations)
            report = grounding_check(answer, n_docs=msg.n_docs)
            coverages.append(report.citation_coverage)
            valid += 1 if report.markers_valid else 0
    n = len(coverages)
    return GroundingSummary(
        mean_coverage=sum(coverages) / n if n else 0.0,
        valid_fraction=valid / n if n else 0.0,
        n_messages=n,
    )


# ---------------------------------------------------------------------------
# JSONL readers for the CLI
# ---------------------------------------------------------------------------

def load_traces(path: Path | str) -> list[NavigationTrace]:
    traces = []
    for lineno, obj in _iter_jsonl(Path(path)):
        try:
            traces.append(NavigationTrace(
                target=obj["target"],
                total_steps=int(obj["total_steps"]),
                ideal_steps=int(obj["ideal_steps"]),
            ))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad trace record: {exc}", lineno) from exc
    return traces


def load_judgments(path: Path | str) -> list[RelationJudgment]:
    judgments = []
    for lineno, obj in _iter_jsonl(Path(path)):
        try:
            judgments.append(RelationJudgment(
                child=obj["child"],
                parent=obj["parent"],
                verdict=obj["verdict"],
            ))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad judgment record: {exc}", lineno) from exc
    return judgments
