"""Exact dense retrieval over externally supplied vectors.

Brute-force cosine similarity is exact and fast at the corpus sizes this
engine serves; rows are L2-normalized once at build time.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..errors import DimensionMismatch
from .config import RankedList


class DenseIndex:
    def __init__(self, ids: list[str], matrix: np.ndarray):
        self.ids = ids
        self.matrix = matrix  # rows L2-normalized (zero rows stay zero)

    @classmethod
    def build(cls, items: Iterable[tuple[str, Sequence[float]]]) -> "DenseIndex":
        pairs = sorted(items, key=lambda kv: kv[0])
        if not pairs:
            return cls(ids=[], matrix=np.zeros((0, 0)))
        dim = len(pairs[0][1])
        for pub_id, vec in pairs:
            if len(vec) != dim:
                raise DimensionMismatch(
                    f"vector for {pub_id} has dim {len(vec)}, index dim {dim}")
        matrix = np.array([list(vec) for _, vec in pairs], dtype=np.float64)
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        np.divide(matrix, norms, out=matrix, where=norms > 0)
        return cls(ids=[pub_id for pub_id, _ in pairs], matrix=matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1] if self.matrix.size else 0

    def __len__(self) -> int:
        return len(self.ids)

    def topk(self, query_vector: Sequence[float], k: int) -> RankedList:
        """Top-k by cosine similarity; ties broken by id ascending.
        Zero-norm queries (or stored zero vectors) score 0."""
        if not self.ids:
            return RankedList(items=(), source="dense")
        q = np.asarray(query_vector, dtype=np.float64)
        if q.shape != (self.dim,):
            raise DimensionMismatch(
                f"query dim {q.shape} does not match index dim {self.dim}")
        qnorm = np.linalg.norm(q)
        sims = self.matrix @ (q / qnorm) if qnorm > 0 else np.zeros(len(self.ids))
        ranked = RankedList.from_scores(
            [(pub_id, float(s)) for pub_id, s in zip(self.ids, sims)],
            source="dense",
        )
        return ranked.head(k)
