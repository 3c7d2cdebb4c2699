"""Corpus loading and candidate-term intake.

Upstream extractors emit large, noisy streams of entity and hyponym-
relation mentions. This module normalizes them, merges synonym variants
(special-character unification plus parenthesized-abbreviation pairs),
keeps only candidates seen more often than the configured thresholds,
and queues the survivors for human review before anything touches the
hierarchy graph.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParseError
from .kgstore import FieldOfStudy, GraphStore, Tier, _iter_jsonl, pub_from_json
from .textnorm import normalize

HYPONYM_RELATION = "hyponym-of"


@dataclass(frozen=True)
class CandidateMention:
    surface: str
    doc_id: str
    kind: str  # "entity" | "hyponym_relation"
    head: str = ""  # child surface, for relations
    tail: str = ""  # parent surface, for relations

    def __post_init__(self):
        if self.kind not in ("entity", "hyponym_relation"):
            raise ValueError(f"bad mention kind: {self.kind}")
        if self.kind == "entity" and not self.surface:
            raise ValueError("entity mention needs a surface")
        if self.kind == "hyponym_relation" and not (self.head and self.tail):
            raise ValueError("relation mention needs head and tail")


@dataclass(frozen=True)
class ExtractionThresholds:
    t_entities: int = 100
    t_relations: int = 3

    def __post_init__(self):
        if self.t_entities < 0 or self.t_relations < 0:
            raise ValueError("thresholds must be >= 0")


@dataclass(frozen=True)
class SynonymCluster:
    canonical: str
    members: frozenset[str]


@dataclass(frozen=True)
class CorpusReport:
    loaded: int
    duplicates: tuple[str, ...]


def load_corpus(path: Path | str, store: GraphStore) -> CorpusReport:
    """Load a publications JSONL file into the store, deduplicating by id.
    Malformed lines raise ParseError with their line number."""
    fresh: dict[str, object] = {}
    duplicates: list[str] = []
    for lineno, obj in _iter_jsonl(Path(path)):
        pub = pub_from_json(obj, lineno)
        if pub.id in fresh or store.has_publication(pub.id):
            duplicates.append(pub.id)
            continue
        fresh[pub.id] = pub
    store.add_publications(fresh.values())
    return CorpusReport(loaded=len(fresh), duplicates=tuple(duplicates))


# ---------------------------------------------------------------------------
# Abbreviation extraction and synonym clustering
# ---------------------------------------------------------------------------

_PAREN_RE = re.compile(r"\(([^()]*)\)")
_WORD_SPLIT_RE = re.compile(r"\s+")
_MAX_LONG_FORM_WORDS = 8


def _is_abbreviation_token(token: str) -> bool:
    """Single token, 2-10 chars, letters mostly uppercase."""
    if not 2 <= len(token) <= 10 or _WORD_SPLIT_RE.search(token):
        return False
    letters = [c for c in token if c.isalpha()]
    if len(letters) < 2:
        return False
    upper = sum(1 for c in letters if c.isupper())
    return upper * 2 > len(letters)


def _is_subsequence(needle: str, haystack: str) -> bool:
    it = iter(haystack)
    return all(ch in it for ch in needle)


def extract_abbreviation(text: str) -> tuple[str, str] | None:
    """First (long form, abbreviation) pair in the text, if any.

    A pair is recognized when a parenthesized uppercase-dominant token of
    2-10 characters immediately follows a multi-word term whose word
    initials contain the abbreviation's letters as a subsequence, anchored
    at the abbreviation's first letter.
    """
    for match in _PAREN_RE.finditer(text):
        abbrev = match.group(1).strip()
        if not _is_abbreviation_token(abbrev):
            continue
        before = text[: match.start()].strip()
        if not before:
            continue
        words = _WORD_SPLIT_RE.split(before)[-_MAX_LONG_FORM_WORDS:]
        letters = "".join(c for c in abbrev if c.isalpha()).casefold()
        for m in range(2, len(words) + 1):
            window = words[-m:]
            initials = "".join(_initials(w) for w in window).casefold()
            if not initials or initials[0] != letters[0]:
                continue
            if _is_subsequence(letters, initials):
                return " ".join(window), abbrev
    return None


def _initials(word: str) -> str:
    """First letters of a word, with hyphenated parts contributing one
    initial each ("short-term" -> "st")."""
    return "".join(part[0] for part in word.split("-") if part)


def strip_abbreviation(surface: str) -> tuple[str, tuple[str, str] | None]:
    """Remove an embedded "long form (ABBR)" suffix from a mention surface,
    returning the clean surface and the harvested pair."""
    pair = extract_abbreviation(surface)
    if pair is None:
        return surface.strip(), None
    cleaned = _PAREN_RE.sub(" ", surface)
    return _WORD_SPLIT_RE.sub(" ", cleaned).strip(), pair


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def add(self, key: str) -> None:
        self.parent.setdefault(key, key)

    def find(self, key: str) -> str:
        root = key
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[key] != root:
            self.parent[key], key = root, self.parent[key]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic: smaller key wins as root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def cluster_synonyms(
    surfaces: Iterable[str],
    pairs: Iterable[tuple[str, str]] = (),
) -> list[SynonymCluster]:
    """Partition surfaces into synonym clusters.

    Surfaces identical after normalization merge; observed (long form,
    abbreviation) pairs merge their clusters. The canonical member is the
    longest surface (ties: lexicographically smallest). Output is sorted
    by canonical; the clusters partition the input exactly.
    """
    keyed: dict[str, set[str]] = {}
    uf = _UnionFind()
    for surface in surfaces:
        key = normalize(surface)
        if not key:
            continue
        keyed.setdefault(key, set()).add(surface)
        uf.add(key)
    for long_form, abbrev in pairs:
        lk, ak = normalize(long_form), normalize(abbrev)
        if lk in keyed and ak in keyed:
            uf.union(lk, ak)
    groups: dict[str, set[str]] = {}
    for key in sorted(keyed):
        groups.setdefault(uf.find(key), set()).update(keyed[key])
    clusters = [
        SynonymCluster(
            canonical=max(sorted(members), key=len),
            members=frozenset(members),
        )
        for members in groups.values()
    ]
    clusters.sort(key=lambda c: c.canonical)
    return clusters


# ---------------------------------------------------------------------------
# Threshold filtering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FilteredCandidates:
    entities: frozenset[str]
    relations: frozenset[tuple[str, str]]  # (child canonical, parent canonical)
    entity_counts: dict[str, int] = field(default_factory=dict)
    relation_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    clusters: tuple[SynonymCluster, ...] = ()


def filter_candidates(
    mentions: Sequence[CandidateMention],
    thresholds: ExtractionThresholds,
    pairs: Iterable[tuple[str, str]] = (),
) -> FilteredCandidates:
    """Keep entity clusters and relation triples mentioned strictly more
    often than the thresholds.

    Counts are pooled per synonym cluster before comparison, so
    abbreviation variants are not undercounted. Abbreviation pairs
    embedded in mention surfaces ("long form (ABBR)") are harvested
    automatically and merged with any explicitly observed `pairs`.
    The result is independent of mention order.
    """
    all_pairs: list[tuple[str, str]] = list(pairs)
    entity_surfaces: list[str] = []
    relation_surfaces: list[tuple[str, str]] = []
    for m in mentions:
        if m.kind == "entity":
            clean, pair = strip_abbreviation(m.surface)
            if pair is not None:
                all_pairs.append(pair)
                entity_surfaces.append(pair[1])
            entity_surfaces.append(clean)
        else:
            relation_surfaces.append((m.head.strip(), m.tail.strip()))

    universe = list(entity_surfaces)
    for head, tail in relation_surfaces:
        universe.extend((head, tail))
    clusters = cluster_synonyms(universe, all_pairs)
    canon_of = {
        member: c.canonical for c in clusters for member in c.members
    }
    canon_by_key = {
        normalize(member): c.canonical for c in clusters for member in c.members
    }

    def canon(surface: str) -> str:
        return canon_of.get(surface) or canon_by_key.get(normalize(surface), surface)

    entity_counts: Counter[str] = Counter()
    for m in mentions:
        if m.kind != "entity":
            continue
        clean, _ = strip_abbreviation(m.surface)
        entity_counts[canon(clean)] += 1
    relation_counts: Counter[tuple[str, str]] = Counter()
    for head, tail in relation_surfaces:
        relation_counts[(canon(head), canon(tail))] += 1

    entities = frozenset(
        s for s, n in entity_counts.items() if n > thresholds.t_entities
    )
    relations = frozenset(
        r for r, n in relation_counts.items() if n > thresholds.t_relations
    )
    return FilteredCandidates(
        entities=entities,
        relations=relations,
        entity_counts=dict(entity_counts),
        relation_counts=dict(relation_counts),
        clusters=tuple(clusters),
    )


# ---------------------------------------------------------------------------
# Curation queue
# ---------------------------------------------------------------------------

PENDING = "pending"
ACCEPTED = "accepted"
CORRECTED = "corrected"
REJECTED = "rejected"


@dataclass(frozen=True)
class CurationItem:
    item_id: str
    kind: str  # "entity" | "relation"
    surface: str = ""  # entity items
    triple: tuple[str, str, str] | None = None  # (child, relation, parent)
    status: str = PENDING
    correction: tuple[str, str, str] | str | None = None
    reason: str = ""

    def payload(self) -> tuple[str, str, str] | str:
        """Triple or surface that a decision applies; corrections win."""
        if self.correction is not None:
            return self.correction
        return self.triple if self.kind == "relation" else self.surface


def items_from_candidates(filtered: FilteredCandidates) -> list[CurationItem]:
    """Pending review items: entities first, then relation triples."""
    items = []
    for i, surface in enumerate(sorted(filtered.entities)):
        items.append(CurationItem(item_id=f"e{i:04d}", kind="entity", surface=surface))
    for i, (child, parent) in enumerate(sorted(filtered.relations)):
        items.append(CurationItem(
            item_id=f"r{i:04d}", kind="relation",
            triple=(child, HYPONYM_RELATION, parent),
        ))
    return items


def resolve(
    store: GraphStore,
    item: CurationItem,
    decision: str,
    correction: tuple[str, str, str] | str | None = None,
    reason: str = "",
) -> CurationItem:
    """Apply a curator decision, mutating the store for accept/correct.

    Accepted and corrected items create any missing extended-tier nodes
    and insert the hyponym edge; a CycleError from the store propagates
    to the caller so an invalid triple is never silently dropped.
    """
    if decision not in (ACCEPTED, CORRECTED, REJECTED):
        raise ValueError(f"bad decision: {decision}")
    if decision == CORRECTED and correction is None:
        raise ValueError("corrected items need a correction")
    if decision == REJECTED:
        return replace(item, status=REJECTED, reason=reason)

    updated = replace(item, status=decision, correction=correction, reason=reason)
    payload = updated.payload()
    if updated.kind == "entity":
        _ensure_fos(store, str(payload))
    else:
        child, _, parent = payload  # type: ignore[misc]
        child_id = _ensure_fos(store, child)
        parent_id = _ensure_fos(store, parent)
        store.add_hyponym(child_id, parent_id)
    return updated


def _ensure_fos(store: GraphStore, surface: str) -> str:
    existing = store.find_fos(surface)
    if existing is not None:
        return existing.id
    return store.add_fos(FieldOfStudy(id="", name=surface, tier=Tier.EXTENDED))


def save_queue(path: Path | str, items: Iterable[CurationItem]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(_item_to_json(item), ensure_ascii=False) + "\n")


def load_queue(path: Path | str) -> list[CurationItem]:
    items = []
    for lineno, obj in _iter_jsonl(Path(path)):
        items.append(_item_from_json(obj, lineno))
    return items


def load_mentions(path: Path | str) -> list[CandidateMention]:
    mentions = []
    for lineno, obj in _iter_jsonl(Path(path)):
        try:
            mentions.append(CandidateMention(
                surface=obj.get("surface", ""),
                doc_id=obj.get("doc_id", ""),
                kind=obj["kind"],
                head=obj.get("head", ""),
                tail=obj.get("tail", ""),
            ))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad mention record: {exc}", lineno) from exc
    return mentions


def _item_to_json(item: CurationItem) -> dict:
    obj = {"item_id": item.item_id, "kind": item.kind, "status": item.status}
    if item.kind == "entity":
        obj["surface"] = item.surface
    else:
        obj["triple"] = list(item.triple or ())
    if item.correction is not None:
        obj["correction"] = (
            list(item.correction) if isinstance(item.correction, tuple)
            else item.correction
        )
    if item.reason:
        obj["reason"] = item.reason
    return obj


def _item_from_json(obj: dict, lineno: int | None = None) -> CurationItem:
    try:
        correction = obj.get("correction")
        if isinstance(correction, list):
            correction = tuple(correction)
        triple = obj.get("triple")
        return CurationItem(
            item_id=obj["item_id"],
            kind=obj["kind"],
            surface=obj.get("surface", ""),
            triple=tuple(triple) if triple else None,
            status=obj.get("status", PENDING),
            correction=correction,
            reason=obj.get("reason", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad curation item: {exc}", lineno) from exc
