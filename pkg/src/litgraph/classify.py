"""Field-of-study labeling and survey detection.

Field labels come in two steps: top-level labels are supplied by an
external label file (the upstream classifier is not part of this
engine), extended labels come from stemmed-name containment in stemmed
titles. Survey detection offers a keyword rule and a small trainable
unigram logistic scorer behind one interface.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np

from .errors import ModelNotTrained, ParseError, UnknownFos
from .kgstore import GraphStore, Publication, Tier, _iter_jsonl
from .textnorm import normalize, stem_tokens

DEFAULT_SURVEY_PHRASES = ("survey", "a review", "landscape")


# ---------------------------------------------------------------------------
# Field-of-study labels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FosLexicon:
    """Stemmed token sequences per FoS id (name plus synonyms)."""

    entries: dict[str, tuple[tuple[str, ...], ...]]
    tiers: dict[str, Tier]

    @classmethod
    def build(cls, store: GraphStore) -> "FosLexicon":
        entries: dict[str, tuple[tuple[str, ...], ...]] = {}
        tiers: dict[str, Tier] = {}
        for node in store.all_fos():
            seqs = {tuple(stem_tokens(node.name))}
            for syn in node.synonyms:
                seqs.add(tuple(stem_tokens(syn)))
            seqs.discard(())
            if not seqs:
                continue
            entries[node.id] = tuple(sorted(seqs))
            tiers[node.id] = node.tier
        return cls(entries=entries, tiers=tiers)


def _contains_run(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    return any(
        tuple(haystack[i : i + n]) == tuple(needle)
        for i in range(len(haystack) - n + 1)
    )


def load_external_labels(path: Path | str) -> dict[str, frozenset[str]]:
    """external_labels.jsonl: {pub_id, fos_ids} per line."""
    labels: dict[str, frozenset[str]] = {}
    for lineno, obj in _iter_jsonl(Path(path)):
        try:
            labels[obj["pub_id"]] = frozenset(obj["fos_ids"])
        except KeyError as exc:
            raise ParseError(f"label record missing {exc}", lineno) from exc
    return labels


def classify_fos_step1(
    pub: Publication,
    external_labels: dict[str, frozenset[str]],
    store: GraphStore,
) -> frozenset[str]:
    """Top-level labels from the external label file. Labels must name
    existing top-level fields; anything else raises UnknownFos."""
    labels = external_labels.get(pub.id, frozenset())
    for fos_id in labels:
        if not store.has_fos(fos_id):
            raise UnknownFos(f"label {fos_id!r} on {pub.id} is not in the graph")
        if store.get_fos(fos_id).tier is not Tier.TOP_LEVEL:
            raise UnknownFos(f"label {fos_id!r} on {pub.id} is not top-level")
    return labels


def classify_fos_step2(pub: Publication, lexicon: FosLexicon) -> frozenset[str]:
    """Extended labels: a FoS is assigned iff one of its stemmed token
    sequences occurs contiguously in the stemmed title."""
    title = stem_tokens(pub.title)
    assigned = set()
    for fos_id, seqs in lexicon.entries.items():
        if lexicon.tiers[fos_id] is not Tier.TOP_LEVEL:
            if any(_contains_run(title, seq) for seq in seqs):
                assigned.add(fos_id)
    return frozenset(assigned)


def classify_corpus_fos(
    store: GraphStore,
    external_labels: dict[str, frozenset[str]],
    lexicon: FosLexicon | None = None,
) -> int:
    """Assign step1 ∪ step2 labels to every publication; returns how many
    publications changed. Re-running is a no-op."""
    from dataclasses import replace

    lexicon = lexicon or FosLexicon.build(store)
    changed = []
    for pub in store.all_publications():
        labels = classify_fos_step1(pub, external_labels, store) | \
            classify_fos_step2(pub, lexicon)
        if labels != pub.fos_ids:
            changed.append(replace(pub, fos_ids=labels))
    store.add_publications(changed)
    return len(changed)


# ---------------------------------------------------------------------------
# Survey detection
# ---------------------------------------------------------------------------

def survey_candidate(
    pub: Publication,
    phrases: Sequence[str] = DEFAULT_SURVEY_PHRASES,
) -> bool:
    """Keyword candidacy: the case-folded title contains one of the
    configured phrases."""
    title = normalize(pub.title)
    return any(normalize(p) in title for p in phrases)


@dataclass(frozen=True)
class SurveyDataset:
    positives: tuple[str, ...]
    negatives: tuple[str, ...]
    seed: int
    ratio: int
    insufficient: bool = False


def build_survey_dataset(
    corpus: Iterable[str] | Iterable[Publication],
    positives: Iterable[str],
    ratio: int = 15,
    seed: int = 0,
) -> SurveyDataset:
    """Sample `ratio` negatives per positive, uniformly without
    replacement from the corpus minus the positives. Reproducible under
    the seed; when the corpus is too small, all remaining documents are
    used and the dataset is flagged insufficient."""
    ids = [p.id if isinstance(p, Publication) else p for p in corpus]
    pos = sorted(set(positives))
    pool = sorted(set(ids) - set(pos))
    want = ratio * len(pos)
    insufficient = len(pool) < want
    rng = random.Random(seed)
    negatives = sorted(pool) if insufficient else sorted(rng.sample(pool, want))
    return SurveyDataset(
        positives=tuple(pos),
        negatives=tuple(negatives),
        seed=seed,
        ratio=ratio,
        insufficient=insufficient,
    )


def save_survey_dataset(path: Path | str, dataset: SurveyDataset) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for pub_id in dataset.positives:
            fh.write(json.dumps({"pub_id": pub_id, "label": 1}) + "\n")
        for pub_id in dataset.negatives:
            fh.write(json.dumps({"pub_id": pub_id, "label": 0}) + "\n")


class SurveyModel(Protocol):
    def score(self, pub: Publication) -> float: ...


class KeywordSurveyModel:
    """Rule fallback: scores 1.0 on keyword candidates, 0.0 otherwise."""

    def __init__(self, phrases: Sequence[str] = DEFAULT_SURVEY_PHRASES):
        self.phrases = tuple(phrases)

    def score(self, pub: Publication) -> float:
        return 1.0 if survey_candidate(pub, self.phrases) else 0.0


class UnigramLogisticModel:
    """Logistic scorer over stemmed title+abstract unigram presence.

    Trained with plain full-batch gradient descent; a fixed vocabulary
    order and seed make training bit-reproducible.
    """

    def __init__(self):
        self.vocab: dict[str, int] = {}
        self.weights: np.ndarray | None = None
        self.bias = 0.0

    @staticmethod
    def _tokens(pub: Publication) -> set[str]:
        return set(stem_tokens(pub.title)) | set(stem_tokens(pub.abstract))

    def _featurize(self, pub: Publication) -> np.ndarray:
        x = np.zeros(len(self.vocab))
        for tok in self._tokens(pub):
            idx = self.vocab.get(tok)
            if idx is not None:
                x[idx] = 1.0
        return x

    def train(
        self,
        pubs: dict[str, Publication],
        dataset: SurveyDataset,
        epochs: int = 300,
        lr: float = 0.5,
        l2: float = 1e-3,
        min_df: int = 2,
    ) -> "UnigramLogisticModel":
        labeled = [(pid, 1.0) for pid in dataset.positives] + \
            [(pid, 0.0) for pid in dataset.negatives]
        labeled = [(pid, y) for pid, y in labeled if pid in pubs]
        df: dict[str, int] = {}
        for pid, _ in labeled:
            for tok in self._tokens(pubs[pid]):
                df[tok] = df.get(tok, 0) + 1
        self.vocab = {
            tok: i
            for i, tok in enumerate(sorted(t for t, n in df.items() if n >= min_df))
        }
        X = np.stack([self._featurize(pubs[pid]) for pid, _ in labeled])
        y = np.array([y for _, y in labeled])
        w = np.zeros(X.shape[1])
        b = 0.0
        n = len(y)
        for _ in range(epochs):
            z = X @ w + b
            p = 1.0 / (1.0 + np.exp(-z))
            grad_w = X.T @ (p - y) / n + l2 * w
            grad_b = float(np.mean(p - y))
            w -= lr * grad_w
            b -= lr * grad_b
        self.weights = w
        self.bias = b
        return self

    def score(self, pub: Publication) -> float:
        if self.weights is None:
            raise ModelNotTrained("survey model has no weights; train or load first")
        z = float(self._featurize(pub) @ self.weights) + self.bias
        return 1.0 / (1.0 + math.exp(-z))

    def save(self, path: Path | str) -> None:
        if self.weights is None:
            raise ModelNotTrained("nothing to save")
        payload = {
            "vocab": self.vocab,
            "weights": [float(x) for x in self.weights],
            "bias": self.bias,
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: Path | str) -> "UnigramLogisticModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        model = cls()
        model.vocab = {k: int(v) for k, v in payload["vocab"].items()}
        model.weights = np.array(payload["weights"], dtype=float)
        model.bias = float(payload["bias"])
        return model


def classify_survey(
    pub: Publication,
    model: SurveyModel,
    threshold: float = 0.5,
) -> tuple[bool, float]:
    """Survey label and confidence from any scorer."""
    score = model.score(pub)
    return score >= threshold, score


def binary_f1(tp: int, fp: int, fn: int) -> float:
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def evaluate_survey_model(
    model: SurveyModel,
    pubs: dict[str, Publication],
    positives: set[str],
    eval_ids: Iterable[str],
    threshold: float = 0.5,
) -> float:
    """F1 of a scorer on a labeled id set."""
    tp = fp = fn = 0
    for pid in eval_ids:
        pred, _ = classify_survey(pubs[pid], model, threshold)
        actual = pid in positives
        if pred and actual:
            tp += 1
        elif pred and not actual:
            fp += 1
        elif actual:
            fn += 1
    return binary_f1(tp, fp, fn)
