"""Weighted reciprocal-rank fusion of sparse and dense rankings.

Only ranks matter, never the input scores. Each document in the union of
both lists scores

    (1 - alpha) / (rrf_k + rank_sparse)  +  alpha / (rrf_k + rank_dense)

with 1-based ranks; a document missing from one list contributes nothing
for that source. Output is ordered by (score desc, id asc).
"""

from __future__ import annotations

from .config import RankedList, SearchConfig


def rrf_fuse(
    sparse: RankedList,
    dense: RankedList,
    cfg: SearchConfig,
) -> RankedList:
    sparse_rank = sparse.rank_of()
    dense_rank = dense.rank_of()
    scores: dict[str, float] = {}
    for pub_id in set(sparse_rank) | set(dense_rank):
        score = 0.0
        if pub_id in sparse_rank:
            score += (1.0 - cfg.alpha) / (cfg.rrf_k + sparse_rank[pub_id])
        if pub_id in dense_rank:
            score += cfg.alpha / (cfg.rrf_k + dense_rank[pub_id])
        scores[pub_id] = score
    return RankedList.from_scores(scores, source="fused")
