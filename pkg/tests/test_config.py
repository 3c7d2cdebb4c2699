import json
import shutil

import pytest

from litgraph.config import AppConfig, AppContext
from litgraph.providers import MockChatProvider, prompt_hash

from app_harness import FIXTURES


def write_config(tmp_path, extra=None):
    shutil.copytree(FIXTURES / "corpus", tmp_path / "data")
    obj = {
        "data_dir": "data",
        "sessions_dir": "data/sessions",
        "port": 9000,
        "search": {"alpha": 0.5, "rrf_k": 30, "rerank_top_k": 50,
                   "page_size": 5, "weights": [0.6, 0.2, 0.2]},
        "rag": {"doc_budget": 1234, "top_docs": 4},
        "provider": {"base_url": "https://llm.test", "model": "m"},
        "embedder": {"kind": "hash", "dim": 16},
    }
    obj.update(extra or {})
    path = tmp_path / "config.json"
    path.write_text(json.dumps(obj))
    return path


def test_config_load_resolves_relative_paths(tmp_path):
    path = write_config(tmp_path)
    cfg = AppConfig.load(path)
    assert cfg.data_dir == tmp_path / "data"
    assert cfg.sessions_dir == tmp_path / "data" / "sessions"
    assert cfg.port == 9000
    assert cfg.search.alpha == 0.5
    assert cfg.search.w_citations == 0.2
    assert cfg.rag.doc_budget == 1234
    assert cfg.provider.base_url == "https://llm.test"
    assert cfg.embedder_kind == "hash"
    assert cfg.embedder_dim == 16


def test_context_build_wires_engines(tmp_path):
    cfg = AppConfig.load(write_config(tmp_path))
    ctx = AppContext.build(cfg, provider=MockChatProvider(default="x"))
    assert len(ctx.store.all_publications()) == 50
    assert ctx.search.cfg.page_size == 5
    assert ctx.chat.config.top_docs == 4
    page = ctx.search.search("machine translation")
    assert page.page_size == 5 and page.results


def test_context_build_missing_data_dir(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"data_dir": "nope"}))
    with pytest.raises(FileNotFoundError):
        AppContext.build(AppConfig.load(path))


def test_context_build_loads_mock_script(tmp_path):
    messages = [{"role": "user", "content": "scripted"}]
    script_path = tmp_path / "script.json"
    script_path.write_text(json.dumps({prompt_hash(messages): "reply"}))
    cfg = AppConfig.load(write_config(tmp_path, {"mock_script": "script.json"}))
    ctx = AppContext.build(cfg)
    assert ctx.chat.provider.complete(messages) == "reply"


def test_config_http_embedder_section(tmp_path):
    path = write_config(tmp_path, {
        "embedder": {"kind": "http", "base_url": "https://emb.test", "model": "e"},
    })
    cfg = AppConfig.load(path)
    assert cfg.embedder_kind == "http"
    assert cfg.embedder_http.base_url == "https://emb.test"
