"""Inverted index with Okapi BM25 scoring.

Documents are indexed over stemmed title+abstract tokens. The inverse
document frequency uses the non-negative variant

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))

and each query token occurrence contributes

    idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len/avgdl)).
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable

from ..errors import EmptyQuery
from ..kgstore import Publication
from ..textnorm import stem_tokens
from .config import RankedList


class SparseIndex:
    def __init__(self, k1: float = 1.2, b: float = 0.75):
        self.k1 = k1
        self.b = b
        self.postings: dict[str, dict[str, int]] = {}  # term -> doc -> tf
        self.doc_len: dict[str, int] = {}
        self._total_len = 0
        self.avgdl = 0.0

    @classmethod
    def build(
        cls,
        pubs: Iterable[Publication],
        k1: float = 1.2,
        b: float = 0.75,
    ) -> "SparseIndex":
        index = cls(k1=k1, b=b)
        for pub in pubs:
            index.add(pub.id, f"{pub.title} {pub.abstract}")
        return index

    def add(self, doc_id: str, text: str) -> None:
        tokens = stem_tokens(text)
        self._total_len += len(tokens) - self.doc_len.get(doc_id, 0)
        self.doc_len[doc_id] = len(tokens)
        for term, tf in Counter(tokens).items():
            self.postings.setdefault(term, {})[doc_id] = tf
        self.avgdl = self._total_len / len(self.doc_len)

    @property
    def n_docs(self) -> int:
        return len(self.doc_len)

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log(1.0 + (self.n_docs - df + 0.5) / (df + 0.5))

    def bm25_topk(self, query: str, k: int) -> RankedList:
        """Top-k documents by BM25; documents sharing no query term are
        omitted (their score is zero). Repeated query tokens contribute
        once per occurrence."""
        terms = stem_tokens(query)
        if not terms:
            raise EmptyQuery("query has no indexable tokens")
        scores: dict[str, float] = {}
        for term in terms:
            docs = self.postings.get(term)
            if not docs:
                continue
            idf = self.idf(term)
            for doc_id, tf in docs.items():
                norm = self.k1 * (1.0 - self.b + self.b * self.doc_len[doc_id] / self.avgdl)
                scores[doc_id] = scores.get(doc_id, 0.0) + \
                    idf * tf * (self.k1 + 1.0) / (tf + norm)
        ranked = RankedList.from_scores(scores, source="sparse")
        return ranked.head(k)
