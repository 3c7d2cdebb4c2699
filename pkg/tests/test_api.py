import json

import pytest
from fastapi.testclient import TestClient

from litgraph.api import create_app

from app_harness import (
    ASK_PREDEFINED,
    ASK_PUB,
    CHAT_ANSWER,
    CHAT_TEXT,
    GOLDEN,
    make_context,
)


@pytest.fixture()
def client(tmp_path):
    ctx = make_context(tmp_path / "sessions")
    return TestClient(create_app(ctx)), ctx


# ---------------------------------------------------------------------------
# search endpoint
# ---------------------------------------------------------------------------

def test_search_returns_results_and_facets(client):
    http, _ = client
    resp = http.get("/search", params={"q": "neural machine translation"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["total"] > 0
    assert body["results"][0]["id"]
    assert body["facets"]["years"]
    assert len(body["facets"]["fos"]) <= 10


def test_search_missing_query_is_400(client):
    http, _ = client
    assert http.get("/search").status_code == 400
    assert http.get("/search", params={"q": "  "}).status_code == 400


def test_search_survey_filter_empty_result_ok(client):
    http, _ = client
    resp = http.get("/search", params={
        "q": "neural machine translation", "survey": "true",
        "year_from": 1900, "year_to": 1901,
    })
    assert resp.status_code == 200
    assert resp.json()["results"] == []
    assert resp.json()["facets"]["years"] == []


def test_search_filters_apply(client):
    http, ctx = client
    resp = http.get("/search", params={"q": "machine translation", "survey": "true"})
    for row in resp.json()["results"]:
        assert row["is_survey"] is True
    resp = http.get("/search", params={
        "q": "machine translation", "venue": ["v-acl", "v-emnlp"]})
    for row in resp.json()["results"]:
        assert row["venue"] in {"v-acl", "v-emnlp"}


def test_search_pagination(client):
    http, _ = client
    p1 = http.get("/search", params={"q": "translation", "page": 1}).json()
    p2 = http.get("/search", params={"q": "translation", "page": 2}).json()
    ids1 = {r["id"] for r in p1["results"]}
    ids2 = {r["id"] for r in p2["results"]}
    assert not ids1 & ids2


def test_search_page_size_param(client):
    http, _ = client
    body = http.get("/search", params={"q": "translation", "page_size": 3}).json()
    assert body["page_size"] == 3
    assert len(body["results"]) == 3


def test_search_short_year_param_aliases(client):
    http, _ = client
    a = http.get("/search", params={"q": "translation", "from": 2020, "to": 2022}).json()
    b = http.get("/search", params={"q": "translation", "year_from": 2020,
                                    "year_to": 2022}).json()
    assert a == b
    for row in a["results"]:
        assert 2020 <= row["year"] <= 2022


# ---------------------------------------------------------------------------
# fos endpoints
# ---------------------------------------------------------------------------

def test_fos_detail_with_children(client):
    http, _ = client
    resp = http.get("/fos/machine-translation")
    assert resp.status_code == 200
    body = resp.json()
    assert body["fos"]["tier"] == "top_level"
    child_ids = {c["id"] for c in body["children"]}
    assert "neural-machine-translation" in child_ids
    assert body["ideal_steps"] == 1
    assert body["total_publications"] > 0


def test_fos_unknown_is_404(client):
    http, _ = client
    assert http.get("/fos/ghost").status_code == 404
    assert http.get("/fos/ghost/subgraph").status_code == 404


def test_subgraph_depth0_has_root_and_parents_only(client):
    http, _ = client
    resp = http.get("/fos/neural-machine-translation/subgraph", params={"depth": 0})
    body = resp.json()
    ids = {n["id"] for n in body["nodes"]}
    assert ids == {"neural-machine-translation", "machine-translation"}
    assert body["edges"] == [
        {"child": "neural-machine-translation", "parent": "machine-translation"}]


def test_subgraph_depth1_children(client):
    http, _ = client
    resp = http.get("/fos/machine-translation/subgraph", params={"depth": 1})
    ids = {n["id"] for n in resp.json()["nodes"]}
    assert {"machine-translation", "neural-machine-translation",
            "statistical-machine-translation"} <= ids
    assert "low-resource-machine-translation" not in ids  # depth 2


def test_subgraph_edges_reference_included_nodes(client):
    http, _ = client
    resp = http.get("/fos/machine-translation/subgraph", params={"depth": 2})
    body = resp.json()
    ids = {n["id"] for n in body["nodes"]}
    for edge in body["edges"]:
        assert edge["child"] in ids
        assert edge["parent"] in ids


# ---------------------------------------------------------------------------
# publication endpoints
# ---------------------------------------------------------------------------

def test_publication_detail(client):
    http, _ = client
    resp = http.get("/publication/p001")
    assert resp.status_code == 200
    body = resp.json()
    assert body["has_fulltext"] is True
    assert body["abstract"]
    assert http.get("/publication/ghost").status_code == 404


def test_ask_paper_endpoint(client):
    http, _ = client
    resp = http.post(f"/publication/{ASK_PUB}/ask",
                     json={"predefined_id": ASK_PREDEFINED})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["followups"]) == 3
    assert body["supports"][0]["section"] == "Method"
    assert body["citations"] == {"1": ASK_PUB}


def test_ask_paper_no_fulltext_is_409(client):
    http, _ = client
    resp = http.post("/publication/p003/ask", json={"predefined_id": 1})
    assert resp.status_code == 409


def test_ask_paper_exclusive_fields_is_400(client):
    http, _ = client
    resp = http.post(f"/publication/{ASK_PUB}/ask",
                     json={"predefined_id": 1, "question": "both?"})
    assert resp.status_code == 400
    resp = http.post(f"/publication/{ASK_PUB}/ask", json={})
    assert resp.status_code == 400


def test_ask_paper_unscripted_prompt_is_502(client):
    http, _ = client
    resp = http.post(f"/publication/{ASK_PUB}/ask",
                     json={"question": "nobody scripted this"})
    assert resp.status_code == 502


# ---------------------------------------------------------------------------
# chat endpoints
# ---------------------------------------------------------------------------

def test_chat_create_and_list_newest_first(client):
    http, _ = client
    resp = http.post("/chat/sessions")
    assert resp.status_code == 201
    sid = resp.json()["session_id"]
    assert sid == "s0001"
    sid2 = http.post("/chat/sessions").json()["session_id"]
    listing = http.get("/chat/sessions").json()["sessions"]
    assert [s["session_id"] for s in listing] == [sid2, sid]


def test_chat_message_citations_resolve(client):
    http, _ = client
    sid = http.post("/chat/sessions").json()["session_id"]
    resp = http.post(f"/chat/sessions/{sid}/messages", json={"text": CHAT_TEXT})
    assert resp.status_code == 200
    body = resp.json()
    assert body["answer"] == CHAT_ANSWER
    assert body["new_search"] is True
    assert body["citations"]
    for marker, pub_id in body["citations"].items():
        assert pub_id in body["retrieved"]
        assert http.get(f"/publication/{pub_id}").status_code == 200


def test_chat_message_unknown_session_404(client):
    http, _ = client
    resp = http.post("/chat/sessions/ghost/messages", json={"text": "hello"})
    assert resp.status_code == 404


def test_chat_message_missing_text_400(client):
    http, _ = client
    sid = http.post("/chat/sessions").json()["session_id"]
    resp = http.post(f"/chat/sessions/{sid}/messages", json={})
    assert resp.status_code == 400


def test_chat_followup_reuse_records_no_new_retrieval(client):
    from litgraph.rag import format_context
    from litgraph.rag.prompts import answer_prompt, route_prompt

    http, ctx = client
    sid = http.post("/chat/sessions").json()["session_id"]
    first = http.post(f"/chat/sessions/{sid}/messages", json={"text": CHAT_TEXT})
    retrieved_before = first.json()["retrieved"]

    followup = "Can you expand on the second point?"
    session = ctx.sessions.get(sid)
    provider = ctx.chat.provider
    provider.add(route_prompt(followup, session.history()), "REUSE")
    docs = [
        (pid, ctx.store.get_publication(pid).title, body)
        for pid, body in session.retrieved_docs
    ]
    provider.add(answer_prompt(followup, format_context(docs)),
                 "Expanding on transfer learning [2].")
    resp = http.post(f"/chat/sessions/{sid}/messages", json={"text": followup})
    body = resp.json()
    assert body["new_search"] is False
    assert body["retrieved"] == retrieved_before
    assert body["citations"] == {"2": retrieved_before[1]}


def test_chat_unscripted_provider_502(client):
    http, _ = client
    sid = http.post("/chat/sessions").json()["session_id"]
    resp = http.post(f"/chat/sessions/{sid}/messages",
                     json={"text": "off-script question"})
    assert resp.status_code == 502


def test_all_pub_ids_in_responses_dereference(client):
    http, _ = client
    body = http.get("/search", params={"q": "translation"}).json()
    ids = [r["id"] for r in body["results"]]
    body = http.get("/fos/machine-translation").json()
    ids += [r["id"] for r in body["publications"]]
    for pub_id in ids:
        assert http.get(f"/publication/{pub_id}").status_code == 200


def test_health(client):
    http, _ = client
    body = http.get("/health").json()
    assert body["publications"] == 50
    assert body["fos"] == 12


# ---------------------------------------------------------------------------
# golden files: byte-stable responses on the fixture snapshot
# ---------------------------------------------------------------------------

def golden_bytes(name):
    return (GOLDEN / name).read_bytes()


def test_golden_search(client):
    http, _ = client
    resp = http.get("/search", params={"q": "machine translation", "survey": "true"})
    assert resp.content == golden_bytes("search.json")


def test_golden_subgraph(client):
    http, _ = client
    resp = http.get("/fos/machine-translation/subgraph", params={"depth": 1})
    assert resp.content == golden_bytes("subgraph.json")


def test_golden_chat_message(client):
    http, _ = client
    sid = http.post("/chat/sessions").json()["session_id"]
    resp = http.post(f"/chat/sessions/{sid}/messages", json={"text": CHAT_TEXT})
    assert resp.content == golden_bytes("chat_message.json")


def test_golden_ask(client):
    http, _ = client
    resp = http.post(f"/publication/{ASK_PUB}/ask",
                     json={"predefined_id": ASK_PREDEFINED})
    assert resp.content == golden_bytes("ask.json")
