"""Application configuration and wiring.

One JSON file describes where the snapshot lives and how the engines
are parameterized; relative paths resolve against the config file's
directory. Provider credentials are environment-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .kgstore import GraphStore
from .providers import (
    ChatProvider,
    HashEmbedder,
    HttpChatProvider,
    HttpEmbeddingProvider,
    MockChatProvider,
    ProviderConfig,
)
from .rag import ChatEngine, RagConfig, SessionStore
from .search import SearchConfig, SearchEngine


@dataclass
class AppConfig:
    data_dir: Path = Path("data")
    sessions_dir: Path = Path("data/sessions")
    host: str = "127.0.0.1"
    port: int = 8080
    cors_origins: list[str] = field(default_factory=lambda: ["*"])
    search: SearchConfig = field(default_factory=SearchConfig)
    rag: RagConfig = field(default_factory=RagConfig)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    embedder_kind: str = "hash"   # hash | http | none
    embedder_dim: int = 32
    embedder_http: ProviderConfig | None = None
    mock_script: Path | None = None  # offline provider replies
    static_dir: Path | None = None   # built web assets, served when present

    @classmethod
    def load(cls, path: Path | str) -> "AppConfig":
        path = Path(path)
        obj = json.loads(path.read_text(encoding="utf-8"))
        base = path.parent

        def respath(key: str, default: str | None) -> Path | None:
            value = obj.get(key, default)
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base / p

        search_obj = obj.get("search", {})
        weights = search_obj.get("weights", [0.7, 0.15, 0.15])
        search = SearchConfig(
            alpha=float(search_obj.get("alpha", 0.8)),
            rrf_k=int(search_obj.get("rrf_k", 60)),
            rerank_top_k=int(search_obj.get("rerank_top_k", 2000)),
            page_size=int(search_obj.get("page_size", 20)),
            bm25_k1=float(search_obj.get("bm25_k1", 1.2)),
            bm25_b=float(search_obj.get("bm25_b", 0.75)),
            w_relevance=float(weights[0]),
            w_citations=float(weights[1]),
            w_recency=float(weights[2]),
        )
        rag_obj = obj.get("rag", {})
        rag = RagConfig(
            doc_budget=int(rag_obj.get("doc_budget", 24_000)),
            top_docs=int(rag_obj.get("top_docs", 5)),
            predefined_questions={
                int(k): v for k, v in rag_obj.get("predefined_questions", {}).items()
            } or RagConfig().predefined_questions,
        )
        provider_obj = obj.get("provider", {})
        provider = ProviderConfig(
            base_url=provider_obj.get("base_url", ""),
            model=provider_obj.get("model", ""),
            temperature=float(provider_obj.get("temperature", 0.0)),
            api_key_env=provider_obj.get("api_key_env", "LLM_API_KEY"),
        )
        emb_obj = obj.get("embedder", {})
        emb_http = None
        if emb_obj.get("kind") == "http":
            emb_http = ProviderConfig(
                base_url=emb_obj.get("base_url", ""),
                model=emb_obj.get("model", ""),
                api_key_env=emb_obj.get("api_key_env", "LLM_API_KEY"),
            )
        return cls(
            data_dir=respath("data_dir", "data"),
            sessions_dir=respath("sessions_dir", "data/sessions"),
            host=obj.get("host", "127.0.0.1"),
            port=int(obj.get("port", 8080)),
            cors_origins=list(obj.get("cors_origins", ["*"])),
            search=search,
            rag=rag,
            provider=provider,
            embedder_kind=emb_obj.get("kind", "hash"),
            embedder_dim=int(emb_obj.get("dim", 32)),
            embedder_http=emb_http,
            mock_script=respath("mock_script", None),
            static_dir=respath("static_dir", None),
        )


@dataclass
class AppContext:
    """Everything a serving process needs, built once at startup."""

    config: AppConfig
    store: GraphStore
    search: SearchEngine
    chat: ChatEngine
    sessions: SessionStore

    @classmethod
    def build(
        cls,
        config: AppConfig,
        provider: ChatProvider | None = None,
        sessions: SessionStore | None = None,
    ) -> "AppContext":
        if not config.data_dir.is_dir():
            raise FileNotFoundError(f"data_dir does not exist: {config.data_dir}")
        if config.mock_script is not None and not config.mock_script.is_file():
            raise FileNotFoundError(f"mock_script does not exist: {config.mock_script}")
        store = GraphStore.load(config.data_dir)
        query_embedder = None
        if config.embedder_kind == "hash":
            # query vectors must live in the stored vectors' space
            dim = store.embedding_dim or config.embedder_dim
            query_embedder = HashEmbedder(dim=dim).embed
        elif config.embedder_kind == "http" and config.embedder_http is not None:
            query_embedder = HttpEmbeddingProvider(config.embedder_http).embed
        search = SearchEngine(store, cfg=config.search, query_embedder=query_embedder)
        if provider is None:
            if config.mock_script is not None:
                provider = MockChatProvider.from_file(config.mock_script)
            else:
                provider = HttpChatProvider(config.provider)
        sessions = sessions or SessionStore(directory=config.sessions_dir)
        chat = ChatEngine(store, search, provider, sessions=sessions, config=config.rag)
        return cls(config=config, store=store, search=search, chat=chat,
                   sessions=sessions)
