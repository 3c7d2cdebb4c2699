"""Metadata rerank, faceted filtering, and the full search pipeline."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import EmptyQuery
from ..kgstore import GraphStore, Publication
from ..textnorm import normalize
from .config import FilterSpec, RankedList, SearchConfig
from .dense import DenseIndex
from .fusion import rrf_fuse
from .sparse import SparseIndex


def _min_max(values: list[float]) -> list[float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.0] * len(values)
    return [(v - lo) / (hi - lo) for v in values]


def rerank(
    fused: RankedList,
    cfg: SearchConfig,
    store: GraphStore,
) -> RankedList:
    """Re-score the top rerank_top_k by a linear blend of fused relevance,
    log-scaled citation count, and recency (each min-max normalized over
    the window). Documents beyond the window keep their fused order after
    the reranked head."""
    head = list(fused.items[: cfg.rerank_top_k])
    tail = list(fused.items[cfg.rerank_top_k :])
    if not head:
        return RankedList(items=(), source="reranked")
    pubs = [store.get_publication(pub_id) for pub_id, _ in head]
    rel = _min_max([score for _, score in head])
    cite = _min_max([math.log1p(p.citation_count) for p in pubs])
    recency = _min_max([float(p.year) for p in pubs])
    rescored = [
        (
            pub_id,
            cfg.w_relevance * rel[i]
            + cfg.w_citations * cite[i]
            + cfg.w_recency * recency[i],
        )
        for i, (pub_id, _) in enumerate(head)
    ]
    rescored.sort(key=lambda kv: (-kv[1], kv[0]))
    return RankedList(items=tuple(rescored + tail), source="reranked")


def apply_filters(
    results: RankedList,
    filters: FilterSpec | None,
    store: GraphStore,
) -> RankedList:
    """Conjunction of the given predicates; preserves order."""
    if filters is None or filters.is_empty():
        return results
    kept = []
    for pub_id, score in results:
        pub = store.get_publication(pub_id)
        if _matches(pub, filters):
            kept.append((pub_id, score))
    return RankedList(items=tuple(kept), source=results.source)


def _matches(pub: Publication, f: FilterSpec) -> bool:
    if f.survey_only and not pub.is_survey:
        return False
    if f.fos_ids is not None and not (pub.fos_ids & f.fos_ids):
        return False
    if f.venue_ids is not None and pub.venue not in f.venue_ids:
        return False
    if f.year_range is not None and not (f.year_range[0] <= pub.year <= f.year_range[1]):
        return False
    if f.min_citations is not None and pub.citation_count < f.min_citations:
        return False
    return True


@dataclass(frozen=True)
class Facets:
    year_histogram: tuple[tuple[int, int], ...]   # (year, count), year asc
    top_fos: tuple[tuple[str, int], ...]          # (fos id, count), top 10
    top_authors: tuple[tuple[str, int], ...]      # (author id, count), top 10


def compute_facets(pub_ids: Sequence[str], store: GraphStore, top_n: int = 10) -> Facets:
    years: Counter[int] = Counter()
    fos: Counter[str] = Counter()
    authors: Counter[str] = Counter()
    for pub_id in pub_ids:
        pub = store.get_publication(pub_id)
        years[pub.year] += 1
        fos.update(pub.fos_ids)
        authors.update(pub.authors)

    def top(counter: Counter) -> tuple[tuple[str, int], ...]:
        return tuple(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n])

    return Facets(
        year_histogram=tuple(sorted(years.items())),
        top_fos=top(fos),
        top_authors=top(authors),
    )


@dataclass(frozen=True)
class SearchPage:
    results: tuple[tuple[str, float], ...]
    total: int
    page: int
    page_size: int
    facets: Facets


class SearchEngine:
    """bm25 + dense cosine -> weighted RRF -> metadata rerank -> filters
    -> facets and pagination, over immutable indices."""

    def __init__(
        self,
        store: GraphStore,
        cfg: SearchConfig | None = None,
        query_embedder: Callable[[str], Sequence[float]] | None = None,
    ):
        self.store = store
        self.cfg = cfg or SearchConfig()
        self.query_embedder = query_embedder
        pubs = store.all_publications()
        self.sparse = SparseIndex.build(pubs, k1=self.cfg.bm25_k1, b=self.cfg.bm25_b)
        self.dense = DenseIndex.build(
            (p.id, p.embedding) for p in pubs if p.embedding is not None
        )

    def retrieve(self, query: str) -> RankedList:
        """Fused, reranked candidates for a query (unfiltered)."""
        if not normalize(query):
            raise EmptyQuery("empty query")
        sparse = self.sparse.bm25_topk(query, self.cfg.rerank_top_k)
        if self.query_embedder is not None and len(self.dense):
            qvec = self.query_embedder(query)
            dense = self.dense.topk(qvec, self.cfg.rerank_top_k)
        else:
            dense = RankedList(items=(), source="dense")
        fused = rrf_fuse(sparse, dense, self.cfg)
        return rerank(fused, self.cfg, self.store)

    def search(
        self,
        query: str,
        filters: FilterSpec | None = None,
        page: int = 1,
        page_size: int | None = None,
    ) -> SearchPage:
        if page < 1:
            raise ValueError("page must be >= 1")
        size = page_size if page_size is not None else self.cfg.page_size
        if size < 1:
            raise ValueError("page_size must be >= 1")
        filtered = apply_filters(self.retrieve(query), filters, self.store)
        facets = compute_facets(filtered.ids(), self.store)
        start = (page - 1) * size
        return SearchPage(
            results=filtered.items[start : start + size],
            total=len(filtered),
            page=page,
            page_size=size,
            facets=facets,
        )
