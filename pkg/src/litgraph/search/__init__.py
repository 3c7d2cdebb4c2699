from .config import FilterSpec, RankedList, SearchConfig
from .dense import DenseIndex
from .engine import (
    Facets,
    SearchEngine,
    SearchPage,
    apply_filters,
    compute_facets,
    rerank,
)
from .fusion import rrf_fuse
from .sparse import SparseIndex

__all__ = [
    "DenseIndex",
    "Facets",
    "FilterSpec",
    "RankedList",
    "SearchConfig",
    "SearchEngine",
    "SearchPage",
    "SparseIndex",
    "apply_filters",
    "compute_facets",
    "rerank",
    "rrf_fuse",
]
