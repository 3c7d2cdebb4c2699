"""Search configuration and result-list types."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SearchConfig:
    alpha: float = 0.8          # dense weight in rank fusion
    rrf_k: int = 60             # reciprocal-rank shift constant
    rerank_top_k: int = 2000    # metadata rerank window
    page_size: int = 20
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    w_relevance: float = 0.7
    w_citations: float = 0.15
    w_recency: float = 0.15

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.rrf_k < 1:
            raise ValueError("rrf_k must be >= 1")
        if self.page_size < 1:
            raise ValueError("page_size must be >= 1")
        if self.rerank_top_k < self.page_size:
            raise ValueError("rerank_top_k must be >= page_size")


@dataclass(frozen=True)
class FilterSpec:
    fos_ids: frozenset[str] | None = None
    venue_ids: frozenset[str] | None = None
    year_range: tuple[int, int] | None = None  # inclusive
    min_citations: int | None = None
    survey_only: bool = False

    def __post_init__(self):
        if self.year_range is not None and self.year_range[0] > self.year_range[1]:
            raise ValueError("year_range from > to")

    def is_empty(self) -> bool:
        return (
            self.fos_ids is None
            and self.venue_ids is None
            and self.year_range is None
            and self.min_citations is None
            and not self.survey_only
        )


@dataclass(frozen=True)
class RankedList:
    """Ordered (publication id, score) pairs from one retrieval stage.

    `from_scores` sorts by (score desc, id asc); the direct constructor
    is for stages that define their own order (the metadata reranker's
    head-then-tail layout). Duplicate ids are rejected either way.
    """

    items: tuple[tuple[str, float], ...]
    source: str  # sparse | dense | fused | reranked

    def __post_init__(self):
        ids = [pub_id for pub_id, _ in self.items]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate ids in {self.source} ranking")

    @classmethod
    def from_scores(
        cls, scores: dict[str, float] | list[tuple[str, float]], source: str,
    ) -> "RankedList":
        pairs = list(scores.items()) if isinstance(scores, dict) else list(scores)
        pairs.sort(key=lambda kv: (-kv[1], kv[0]))
        return cls(items=tuple(pairs), source=source)

    def ids(self) -> list[str]:
        return [pub_id for pub_id, _ in self.items]

    def rank_of(self) -> dict[str, int]:
        """1-based rank per id."""
        return {pub_id: i + 1 for i, (pub_id, _) in enumerate(self.items)}

    def head(self, k: int) -> "RankedList":
        return RankedList(items=self.items[:k], source=self.source)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)
