import json
import shutil

import pytest
from click.testing import CliRunner

from litgraph.cli import main
from litgraph.kgstore import GraphStore
from litgraph.rag import ChatMessage, SessionStore

from app_harness import FIXTURES


@pytest.fixture()
def data_dir(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(FIXTURES / "corpus", target)
    return target


def run(*args, expect=0):
    runner = CliRunner()
    result = runner.invoke(main, [str(a) for a in args])
    assert result.exit_code == expect, result.output
    return result


def test_ingest_corpus(tmp_path, data_dir):
    path = tmp_path / "new.jsonl"
    rows = [
        {"id": "x1", "title": "Fresh Paper on Parsing", "year": 2024},
        {"id": "x1", "title": "Dup", "year": 2024},
        {"id": "x2", "title": "Another Fresh Paper", "year": 2024},
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows))
    result = run("ingest", "corpus", path, "--data", data_dir)
    assert "loaded 2 publications" in result.output
    assert "duplicate id skipped: x1" in result.output
    assert GraphStore.load(data_dir).has_publication("x2")


def test_ingest_candidates_writes_queue(tmp_path):
    path = tmp_path / "mentions.jsonl"
    mentions = (
        [{"surface": "dependency parsing", "doc_id": "d", "kind": "entity"}] * 3
        + [{"surface": "", "doc_id": "d", "kind": "hyponym_relation",
            "head": "dependency parsing", "tail": "parsing"}] * 2
    )
    path.write_text("\n".join(json.dumps(m) for m in mentions))
    queue = tmp_path / "queue.jsonl"
    result = run("ingest", "candidates", path, "--t-entities", 2,
                 "--t-relations", 1, "--queue", queue)
    assert "retained 1 entities, 1 relations" in result.output
    items = [json.loads(l) for l in queue.read_text().splitlines()]
    assert {i["kind"] for i in items} == {"entity", "relation"}
    assert all(i["status"] == "pending" for i in items)


def test_curate_accept_flow(tmp_path, data_dir):
    queue = tmp_path / "queue.jsonl"
    queue.write_text(json.dumps({
        "item_id": "r0000", "kind": "relation", "status": "pending",
        "triple": ["document-level machine translation", "hyponym-of",
                   "machine translation"],
    }) + "\n")
    runner = CliRunner()
    result = runner.invoke(
        main, ["curate", str(queue), "--data", str(data_dir)], input="a\n")
    assert result.exit_code == 0, result.output
    store = GraphStore.load(data_dir)
    child = store.find_fos("document-level machine translation")
    assert child is not None
    assert "machine-translation" in store.parents_of(child.id)
    saved = json.loads(queue.read_text().splitlines()[0])
    assert saved["status"] == "accepted"


def test_classify_fos_cli(data_dir):
    result = run("classify", "fos", "--data", data_dir,
                 "--labels", FIXTURES / "corpus" / "external_labels.jsonl")
    assert "updated 0 publications" in result.output  # fixture ships classified


def test_classify_survey_train_and_apply(tmp_path):
    data = tmp_path / "survey-data"
    data.mkdir()
    shutil.copy(FIXTURES / "survey" / "publications.jsonl",
                data / "publications.jsonl")
    model_path = tmp_path / "model.json"
    dataset_out = tmp_path / "survey_dataset.jsonl"
    result = run("classify", "survey", "--data", data, "--train",
                 "--seed", 0, "--model-path", model_path,
                 "--dataset-out", dataset_out)
    assert "trained on" in result.output
    assert model_path.exists()
    rows = [json.loads(l) for l in dataset_out.read_text().splitlines()]
    assert {r["label"] for r in rows} == {0, 1}
    result = run("classify", "survey", "--data", data, "--apply",
                 "--model-path", model_path)
    assert "flagged" in result.output


def test_index_build_hash_embeddings(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    (data / "publications.jsonl").write_text(json.dumps({
        "id": "p1", "title": "Graph Search", "year": 2020}) + "\n")
    result = run("index", "build", "--data", data, "--hash-dim", 16)
    assert "vectors attached: 1" in result.output
    pub = GraphStore.load(data).get_publication("p1")
    assert pub.embedding is not None and len(pub.embedding) == 16


def test_index_build_embeddings_file(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    (data / "publications.jsonl").write_text(json.dumps({
        "id": "p1", "title": "Graph Search", "year": 2020}) + "\n")
    emb = tmp_path / "embeddings.jsonl"
    emb.write_text(json.dumps({"pub_id": "p1", "vector": [1.0, 0.0]}) + "\n")
    run("index", "build", "--data", data, "--embeddings", emb)
    pub = GraphStore.load(data).get_publication("p1")
    assert pub.embedding == (1.0, 0.0)


def test_search_cli(data_dir):
    result = run("search", "neural machine translation", "--data", data_dir)
    assert "results" in result.output
    assert "Neural Machine Translation" in result.output


def test_search_cli_survey_and_year_filters(data_dir):
    result = run("search", "machine translation", "--data", data_dir,
                 "--survey", "--from", 2020)
    assert "[survey]" in result.output
    lines = [l for l in result.output.splitlines() if l.startswith("  ")]
    assert lines  # at least one hit
    for line in lines:
        year = int(line.split()[1])
        assert year >= 2020


def test_eval_mape_cli():
    result = run("eval", "mape", FIXTURES / "eval" / "traces.jsonl")
    assert "mape: 0.3889" in result.output


def test_eval_mape_accepts_ui_exported_trace(tmp_path):
    # exactly the line shape the web frontend's trace export emits
    path = tmp_path / "traces.jsonl"
    path.write_text('{"target":"lowres","total_steps":2,"ideal_steps":2}\n')
    result = run("eval", "mape", path)
    assert "mape: 0.0000" in result.output


def test_eval_relations_cli():
    result = run("eval", "relations", FIXTURES / "eval" / "judgments.jsonl")
    assert "precision: 0.7500" in result.output
    assert "recall: 0.7500" in result.output


def test_eval_grounding_cli(tmp_path):
    sessions = SessionStore(directory=tmp_path / "sessions")
    s = sessions.create()
    sessions.record_message(s, ChatMessage(role="user", content="q"))
    sessions.record_message(s, ChatMessage(
        role="assistant", content="Cited [1]. Not cited.",
        citations={1: "p001"}, n_docs=5))
    result = run("eval", "grounding", tmp_path / "sessions")
    assert "messages: 1" in result.output
    assert "mean coverage: 0.5000" in result.output
    assert "valid: 100.0%" in result.output


def test_describe_fos_cli(tmp_path, data_dir):
    script = tmp_path / "script.json"
    script.write_text(json.dumps({"__default__": "A compact research field."}))
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "data_dir": str(data_dir),
        "sessions_dir": str(tmp_path / "sessions"),
        "mock_script": str(script),
    }))
    result = run("describe-fos", "--data", data_dir, "--config", config)
    assert "wrote 12 descriptions" in result.output
    store = GraphStore.load(data_dir)
    assert store.get_fos("machine-translation").description == \
        "A compact research field."
    # second run skips nodes that already have text
    result = run("describe-fos", "--data", data_dir, "--config", config)
    assert "wrote 0 descriptions" in result.output


def test_refresh_cli(tmp_path, data_dir):
    incoming = tmp_path / "incoming.jsonl"
    incoming.write_text(json.dumps({
        "id": "x9", "title": "A Survey of Speech Translation", "year": 2024,
    }) + "\n")
    result = run("refresh", "--data", data_dir, "--incoming", incoming)
    assert "loaded 1 new publications" in result.output
    store = GraphStore.load(data_dir)
    pub = store.get_publication("x9")
    assert pub.is_survey  # keyword rule applied during refresh
    assert pub.embedding is not None
