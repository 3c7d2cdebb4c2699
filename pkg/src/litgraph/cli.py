"""Command-line entry points: ingestion, curation, classification,
index builds, search, evaluation, and the HTTP server."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import classify as clf
from . import evalkit, ingest
from .config import AppConfig, AppContext
from .errors import CycleError, LitGraphError
from .kgstore import GraphStore, _iter_jsonl
from .providers import HashEmbedder
from .rag import iter_session_files
from .search import FilterSpec, SearchConfig, SearchEngine


@click.group()
def main():
    """Literature exploration engine."""


def _load_store(data_dir: str) -> GraphStore:
    return GraphStore.load(Path(data_dir))


# -- ingestion ---------------------------------------------------------------

@main.group("ingest")
def ingest_cmd():
    """Corpus and candidate ingestion."""


@ingest_cmd.command("corpus")
@click.argument("path", type=click.Path(exists=True))
@click.option("--data", default="data", show_default=True, help="snapshot directory")
def ingest_corpus(path: str, data: str):
    """Load a publications JSONL file into the snapshot."""
    store = _load_store(data)
    report = ingest.load_corpus(path, store)
    store.save(Path(data))
    click.echo(f"loaded {report.loaded} publications")
    for dup in report.duplicates:
        click.echo(f"duplicate id skipped: {dup}")


@ingest_cmd.command("candidates")
@click.argument("path", type=click.Path(exists=True))
@click.option("--t-entities", default=100, show_default=True)
@click.option("--t-relations", default=3, show_default=True)
@click.option("--queue", default="curation_queue.jsonl", show_default=True,
              help="output review queue")
def ingest_candidates(path: str, t_entities: int, t_relations: int, queue: str):
    """Threshold-filter candidate mentions into a curation queue."""
    mentions = ingest.load_mentions(path)
    thresholds = ingest.ExtractionThresholds(
        t_entities=t_entities, t_relations=t_relations)
    filtered = ingest.filter_candidates(mentions, thresholds)
    items = ingest.items_from_candidates(filtered)
    ingest.save_queue(queue, items)
    click.echo(
        f"retained {len(filtered.entities)} entities, "
        f"{len(filtered.relations)} relations -> {len(items)} queue items")


@main.command("curate")
@click.argument("queue", type=click.Path(exists=True))
@click.option("--data", default="data", show_default=True)
def curate(queue: str, data: str):
    """Interactive review loop over a curation queue."""
    store = _load_store(data)
    items = ingest.load_queue(queue)
    for i, item in enumerate(items):
        if item.status != ingest.PENDING:
            continue
        label = item.surface if item.kind == "entity" else " -> ".join(item.triple)
        click.echo(f"[{item.item_id}] {item.kind}: {label}")
        choice = click.prompt(
            "accept / correct / reject / skip / quit",
            type=click.Choice(["a", "c", "r", "s", "q"]),
            default="s",
        )
        if choice == "q":
            break
        if choice == "s":
            continue
        try:
            if choice == "a":
                items[i] = ingest.resolve(store, item, ingest.ACCEPTED)
            elif choice == "c":
                if item.kind == "entity":
                    correction = click.prompt("replacement surface")
                else:
                    child = click.prompt("child", default=item.triple[0])
                    parent = click.prompt("parent", default=item.triple[2])
                    correction = (child, ingest.HYPONYM_RELATION, parent)
                items[i] = ingest.resolve(store, item, ingest.CORRECTED,
                                          correction=correction)
            else:
                reason = click.prompt("reason", default="out of domain")
                items[i] = ingest.resolve(store, item, ingest.REJECTED, reason=reason)
        except CycleError as exc:
            click.echo(f"rejected by the graph: {exc}")
            continue
        ingest.save_queue(queue, items)
        store.save(Path(data))
    ingest.save_queue(queue, items)
    store.save(Path(data))
    click.echo("queue saved")


# -- classification ----------------------------------------------------------

@main.group("classify")
def classify_cmd():
    """Field-of-study and survey labeling."""


@classify_cmd.command("fos")
@click.option("--data", default="data", show_default=True)
@click.option("--labels", type=click.Path(exists=True), default=None,
              help="external top-level label file (JSONL)")
def classify_fos(data: str, labels: str | None):
    """Assign FoS labels: external top-level labels plus stemmed-title
    containment for extended fields."""
    store = _load_store(data)
    external = clf.load_external_labels(labels) if labels else {}
    changed = clf.classify_corpus_fos(store, external)
    store.save(Path(data))
    click.echo(f"updated {changed} publications")


@classify_cmd.command("survey")
@click.option("--data", default="data", show_default=True)
@click.option("--train/--apply", "do_train", default=False)
@click.option("--seed", default=0, show_default=True)
@click.option("--ratio", default=15, show_default=True)
@click.option("--model-path", default="survey_model.json", show_default=True)
@click.option("--dataset-out", default=None,
              help="also write the sampled dataset as JSONL")
@click.option("--threshold", default=0.5, show_default=True)
def classify_survey_cmd(data: str, do_train: bool, seed: int, ratio: int,
                        model_path: str, dataset_out: str | None,
                        threshold: float):
    """Train the unigram survey scorer from keyword candidates, or apply
    a trained model to flag surveys in the snapshot."""
    store = _load_store(data)
    pubs = {p.id: p for p in store.all_publications()}
    if do_train:
        positives = sorted(pid for pid, p in pubs.items() if clf.survey_candidate(p))
        dataset = clf.build_survey_dataset(pubs.keys(), positives,
                                           ratio=ratio, seed=seed)
        if dataset.insufficient:
            click.echo("warning: corpus too small for the full negative ratio")
        if dataset_out:
            clf.save_survey_dataset(dataset_out, dataset)
        model = clf.UnigramLogisticModel().train(pubs, dataset)
        model.save(model_path)
        click.echo(
            f"trained on {len(dataset.positives)} positives / "
            f"{len(dataset.negatives)} negatives -> {model_path}")
        return
    from dataclasses import replace

    model = clf.UnigramLogisticModel.load(model_path)
    flagged = 0
    changed = []
    for pub in store.all_publications():
        label, _ = clf.classify_survey(pub, model, threshold=threshold)
        if label != pub.is_survey:
            changed.append(replace(pub, is_survey=label))
        flagged += 1 if label else 0
    store.add_publications(changed)
    store.save(Path(data))
    click.echo(f"flagged {flagged} surveys")


# -- index -------------------------------------------------------------------

@main.group("index")
def index_cmd():
    """Index maintenance."""


@index_cmd.command("build")
@click.option("--data", default="data", show_default=True)
@click.option("--embeddings", type=click.Path(exists=True), default=None,
              help="embeddings.jsonl with {pub_id, vector} per line")
@click.option("--hash-dim", default=0, show_default=True,
              help="fill missing vectors with hashed embeddings of this dimension")
def index_build(data: str, embeddings: str | None, hash_dim: int):
    """Attach vectors to the snapshot; sparse and dense indices are built
    from it at serve time."""
    store = _load_store(data)
    attached = 0
    if embeddings:
        def _vectors():
            for _, obj in _iter_jsonl(Path(embeddings)):
                yield obj["pub_id"], obj["vector"]
        attached = store.attach_embeddings(_vectors())
    if hash_dim:
        from dataclasses import replace

        embedder = HashEmbedder(dim=hash_dim)
        filled = [
            replace(pub, embedding=tuple(
                embedder.embed(f"{pub.title} {pub.abstract}")))
            for pub in store.all_publications() if pub.embedding is None
        ]
        attached += store.add_publications(filled)
    store.save(Path(data))
    click.echo(f"vectors attached: {attached}")


# -- search ------------------------------------------------------------------

@main.command("search")
@click.argument("query")
@click.option("--data", default="data", show_default=True)
@click.option("--survey", is_flag=True, default=False)
@click.option("--from", "year_from", type=int, default=None)
@click.option("--to", "year_to", type=int, default=None)
@click.option("--min-citations", type=int, default=None)
@click.option("--fos", multiple=True)
@click.option("--venue", multiple=True)
@click.option("--page", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--hash-dim", default=32, show_default=True)
def search_cmd(query: str, data: str, survey: bool, year_from: int | None,
               year_to: int | None, min_citations: int | None,
               fos: tuple[str, ...], venue: tuple[str, ...], page: int,
               hash_dim: int):
    """Hybrid search over the snapshot."""
    store = _load_store(data)
    engine = SearchEngine(
        store, cfg=SearchConfig(),
        query_embedder=HashEmbedder(dim=hash_dim).embed if hash_dim else None)
    year_range = None
    if year_from is not None or year_to is not None:
        year_range = (year_from or -10_000, year_to or 10_000)
    filters = FilterSpec(
        fos_ids=frozenset(fos) or None,
        venue_ids=frozenset(venue) or None,
        year_range=year_range,
        min_citations=min_citations,
        survey_only=survey,
    )
    result = engine.search(query, filters=filters, page=page)
    click.echo(f"{result.total} results")
    for pub_id, score in result.results:
        pub = store.get_publication(pub_id)
        flag = " [survey]" if pub.is_survey else ""
        click.echo(f"  {score:.6f}  {pub.year}  {pub.title}{flag}  ({pub_id})")


# -- evaluation ----------------------------------------------------------------

@main.group("eval")
def eval_cmd():
    """Evaluation metrics."""


@eval_cmd.command("mape")
@click.argument("traces", type=click.Path(exists=True))
def eval_mape(traces: str):
    """Mean absolute percentage of extra navigation steps."""
    value = evalkit.mape(evalkit.load_traces(traces))
    click.echo(f"mape: {value:.4f}")


@eval_cmd.command("relations")
@click.argument("judgments", type=click.Path(exists=True))
def eval_relations(judgments: str):
    """Precision / recall / F1 over relation judgments."""
    report = evalkit.relation_prf(evalkit.load_judgments(judgments))
    click.echo(
        f"precision: {report.precision:.4f}  recall: {report.recall:.4f}  "
        f"f1: {report.f1:.4f}" + ("  (degenerate)" if report.degenerate else ""))


@eval_cmd.command("grounding")
@click.argument("session_dir", type=click.Path(exists=True))
def eval_grounding(session_dir: str):
    """Aggregate citation grounding over persisted chat sessions."""
    summary = evalkit.grounding_report(iter_session_files(session_dir))
    click.echo(
        f"messages: {summary.n_messages}  mean coverage: "
        f"{summary.mean_coverage:.4f}  valid: {summary.valid_fraction * 100:.1f}%")


# -- serving -------------------------------------------------------------------

@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
def serve(config_path: str):
    """Run the HTTP API."""
    import uvicorn

    from .api import create_app

    config = AppConfig.load(config_path)
    ctx = AppContext.build(config)
    uvicorn.run(create_app(ctx), host=config.host, port=config.port)


@main.command("refresh")
@click.option("--data", default="data", show_default=True)
@click.option("--incoming", type=click.Path(exists=True), required=True,
              help="JSONL of newly fetched publications")
@click.option("--labels", type=click.Path(exists=True), default=None)
@click.option("--hash-dim", default=32, show_default=True)
def refresh(data: str, incoming: str, labels: str | None, hash_dim: int):
    """Batch refresh: load new publications, classify them, fill missing
    vectors, and save the snapshot. Meant for a cron schedule."""
    from dataclasses import replace

    store = _load_store(data)
    report = ingest.load_corpus(incoming, store)
    external = clf.load_external_labels(labels) if labels else {}
    clf.classify_corpus_fos(store, external)
    store.add_publications([
        replace(pub, is_survey=True)
        for pub in store.all_publications()
        if not pub.is_survey and clf.survey_candidate(pub)
    ])
    dim = store.embedding_dim or hash_dim
    embedder = HashEmbedder(dim=dim)
    filled = store.add_publications([
        replace(pub, embedding=tuple(
            embedder.embed(f"{pub.title} {pub.abstract}")))
        for pub in store.all_publications() if pub.embedding is None
    ])
    store.save(Path(data))
    click.echo(
        f"loaded {report.loaded} new publications "
        f"({len(report.duplicates)} duplicates), embedded {filled}")


@main.command("describe-fos")
@click.option("--data", default="data", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--force", is_flag=True, default=False)
def describe_fos(data: str, config_path: str, force: bool):
    """Generate short node descriptions through the configured provider."""
    config = AppConfig.load(config_path)
    ctx = AppContext.build(config)
    written = ctx.chat.describe_all_fos(force=force)
    ctx.store.save(Path(data))
    click.echo(f"wrote {written} descriptions")


def run():
    try:
        main()
    except LitGraphError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    run()
