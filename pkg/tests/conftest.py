from __future__ import annotations

from pathlib import Path

import pytest

from litgraph.kgstore import GraphStore
from litgraph.providers import HashEmbedder
from litgraph.search import SearchConfig, SearchEngine

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def corpus_store() -> GraphStore:
    """Fresh load of the 50-document corpus fixture (mutable per test)."""
    return GraphStore.load(FIXTURES / "corpus")


@pytest.fixture()
def search_engine(corpus_store) -> SearchEngine:
    return SearchEngine(
        corpus_store,
        cfg=SearchConfig(page_size=10, rerank_top_k=100),
        query_embedder=HashEmbedder(dim=32).embed,
    )


@pytest.fixture()
def hierarchy_store() -> GraphStore:
    return GraphStore.load(FIXTURES / "hierarchy")
