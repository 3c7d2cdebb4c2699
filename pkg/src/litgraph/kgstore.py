"""Store for the field-of-study hierarchy and the publication graph.

The hierarchy is a DAG of child->parent ("is a subfield of") edges over
FieldOfStudy nodes. Mutations validate acyclicity up front and swap in a
new immutable snapshot, so concurrent readers never observe a partial
update. Everything fits in memory at the scales this engine targets
(hundreds of fields, ~1e5 publications); persistence is a plain JSONL
snapshot per collection.
"""

from __future__ import annotations

import json
import re
import threading
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    CycleError,
    DuplicateName,
    ParseError,
    SelfLoopError,
    UnknownId,
    Unreachable,
)
from .textnorm import normalize


class Tier(str, Enum):
    TOP_LEVEL = "top_level"
    EXTENDED = "extended"


@dataclass(frozen=True)
class FieldOfStudy:
    id: str
    name: str
    synonyms: frozenset[str] = frozenset()
    description: str | None = None
    tier: Tier = Tier.EXTENDED

    def surfaces(self) -> set[str]:
        """All normalized lookup keys for this node."""
        keys = {normalize(self.name)}
        keys.update(normalize(s) for s in self.synonyms)
        keys.discard("")
        return keys


@dataclass(frozen=True)
class Publication:
    id: str
    title: str
    abstract: str = ""
    year: int = 0
    venue: str = ""
    authors: tuple[str, ...] = ()
    citation_count: int = 0
    cited_ids: tuple[str, ...] = ()
    tldr: str | None = None
    fulltext: str | None = None  # relative path to a plain-text file
    fos_ids: frozenset[str] = frozenset()
    is_survey: bool = False
    embedding: tuple[float, ...] | None = None


@dataclass(frozen=True)
class GraphStats:
    n_fos: int
    n_hyponym_edges: int
    max_depth: int


@dataclass(frozen=True)
class Subgraph:
    nodes: tuple[FieldOfStudy, ...]
    edges: tuple[tuple[str, str], ...]  # (child, parent)


@dataclass(frozen=True)
class _Snapshot:
    """One immutable state of the whole store. Containers are never
    mutated after construction; mutations copy and swap."""

    fos: dict[str, FieldOfStudy] = field(default_factory=dict)
    surface_index: dict[str, str] = field(default_factory=dict)
    parents: dict[str, tuple[str, ...]] = field(default_factory=dict)
    children: dict[str, tuple[str, ...]] = field(default_factory=dict)
    pubs: dict[str, Publication] = field(default_factory=dict)
    embedding_dim: int | None = None


_SLUG_RE = re.compile(r"[^a-z0-9]+")


def _slug(name: str) -> str:
    return _SLUG_RE.sub("-", normalize(name)).strip("-") or "fos"


class GraphStore:
    """Thread-safe store with immutable-snapshot reads."""

    def __init__(self, base_dir: Path | str | None = None):
        self._snap = _Snapshot()
        self._lock = threading.Lock()
        self.base_dir = Path(base_dir) if base_dir is not None else None

    # -- field-of-study nodes ----------------------------------------------

    def add_fos(self, node: FieldOfStudy) -> str:
        """Insert a node; returns its id (generated from the name when the
        given id is empty). Raises DuplicateName when the id, name, or any
        synonym collides with an existing node after normalization."""
        name = normalize(node.name)
        if not name:
            raise ValueError("FoS name must be non-empty")
        # a synonym equal to the name is redundant, not an error
        synonyms = frozenset(s for s in node.synonyms if normalize(s) != name)
        with self._lock:
            snap = self._snap
            node_id = node.id or _slug(node.name)
            if node_id in snap.fos:
                raise DuplicateName(f"fos id already present: {node_id}")
            node = replace(node, id=node_id, synonyms=synonyms)
            for surface in sorted(node.surfaces()):
                owner = snap.surface_index.get(surface)
                if owner is not None:
                    raise DuplicateName(
                        f"surface {surface!r} already names fos {owner!r}")
            fos = dict(snap.fos)
            fos[node_id] = node
            surface_index = dict(snap.surface_index)
            for surface in node.surfaces():
                surface_index[surface] = node_id
            self._snap = replace(snap, fos=fos, surface_index=surface_index)
            return node_id

    def get_fos(self, fos_id: str) -> FieldOfStudy:
        node = self._snap.fos.get(fos_id)
        if node is None:
            raise UnknownId(f"no such fos: {fos_id}")
        return node

    def has_fos(self, fos_id: str) -> bool:
        return fos_id in self._snap.fos

    def find_fos(self, surface: str) -> FieldOfStudy | None:
        """Lookup by canonical name or any synonym (normalized)."""
        snap = self._snap
        fos_id = snap.surface_index.get(normalize(surface))
        return snap.fos[fos_id] if fos_id is not None else None

    def all_fos(self) -> list[FieldOfStudy]:
        return sorted(self._snap.fos.values(), key=lambda n: n.id)

    def set_description(self, fos_id: str, text: str, force: bool = False) -> bool:
        """Attach a short description; returns False when one is already
        present and force is not set."""
        with self._lock:
            snap = self._snap
            node = snap.fos.get(fos_id)
            if node is None:
                raise UnknownId(f"no such fos: {fos_id}")
            if node.description and not force:
                return False
            fos = dict(snap.fos)
            fos[fos_id] = replace(node, description=text)
            self._snap = replace(snap, fos=fos)
            return True

    # -- hierarchy edges ----------------------------------------------------

    def add_hyponym(self, child: str, parent: str) -> bool:
        """Add a child->parent edge iff it keeps the graph acyclic.
        Returns True when the edge is new, False when already present."""
        if child == parent:
            raise SelfLoopError(f"self loop on {child}")
        with self._lock:
            snap = self._snap
            for fos_id in (child, parent):
                if fos_id not in snap.fos:
                    raise UnknownId(f"no such fos: {fos_id}")
            if parent in snap.parents.get(child, ()):
                return False
            # cycle iff the child is already an ancestor of the parent
            if self._reachable_up(snap, start=parent, target=child):
                raise CycleError(f"edge {child} -> {parent} would close a cycle")
            parents = dict(snap.parents)
            parents[child] = tuple(sorted((*snap.parents.get(child, ()), parent)))
            children = dict(snap.children)
            children[parent] = tuple(sorted((*snap.children.get(parent, ()), child)))
            self._snap = replace(snap, parents=parents, children=children)
            return True

    @staticmethod
    def _reachable_up(snap: _Snapshot, start: str, target: str) -> bool:
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node == target:
                return True
            for p in snap.parents.get(node, ()):
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
        return False

    def parents_of(self, fos_id: str) -> tuple[str, ...]:
        self.get_fos(fos_id)
        return self._snap.parents.get(fos_id, ())

    def children_of(self, fos_id: str) -> tuple[str, ...]:
        self.get_fos(fos_id)
        return self._snap.children.get(fos_id, ())

    def edges(self) -> list[tuple[str, str]]:
        snap = self._snap
        return sorted(
            (child, parent)
            for child, ps in snap.parents.items()
            for parent in ps
        )

    # -- navigation queries ---------------------------------------------------

    def subgraph(self, root: str, depth: int) -> Subgraph:
        """Descendants of `root` within `depth` edges, plus the root's
        direct parents (one level up), with all hierarchy edges between
        the included nodes. depth=0 yields the root and its parents."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        snap = self._snap
        if root not in snap.fos:
            raise UnknownId(f"no such fos: {root}")
        included = {root}
        included.update(snap.parents.get(root, ()))
        frontier = [root]
        for _ in range(depth):
            nxt = []
            for node in frontier:
                for child in snap.children.get(node, ()):
                    if child not in included:
                        included.add(child)
                        nxt.append(child)
            frontier = nxt
        nodes = tuple(snap.fos[i] for i in sorted(included))
        edges = tuple(
            (child, parent)
            for child in sorted(included)
            for parent in snap.parents.get(child, ())
            if parent in included
        )
        return Subgraph(nodes=nodes, edges=edges)

    def ideal_steps(self, target: str) -> int:
        """Fewest navigation steps to reach `target` from the visible top
        level: length of the shortest downward path from any top-level
        node, floored at 1 (selecting a top-level field is one click)."""
        snap = self._snap
        if target not in snap.fos:
            raise UnknownId(f"no such fos: {target}")
        dist = {
            fos_id: 0
            for fos_id, node in snap.fos.items()
            if node.tier is Tier.TOP_LEVEL
        }
        queue = deque(sorted(dist))
        while queue:
            node = queue.popleft()
            if node == target:
                return max(1, dist[node])
            for child in snap.children.get(node, ()):
                if child not in dist:
                    dist[child] = dist[node] + 1
                    queue.append(child)
        if target in dist:
            return max(1, dist[target])
        raise Unreachable(f"{target} has no top-level ancestor")

    def stats(self) -> GraphStats:
        snap = self._snap
        n_edges = sum(len(ps) for ps in snap.parents.values())
        return GraphStats(
            n_fos=len(snap.fos),
            n_hyponym_edges=n_edges,
            max_depth=self._max_depth(snap),
        )

    @staticmethod
    def _max_depth(snap: _Snapshot) -> int:
        """Longest downward path from any top-level node, counting the
        top-level node as level 1. Longest-path DP over a Kahn ordering."""
        if not snap.fos:
            return 0
        indeg = {fos_id: 0 for fos_id in snap.fos}
        for parent, cs in snap.children.items():
            for c in cs:
                indeg[c] += 1
        level = {
            fos_id: 1
            for fos_id, node in snap.fos.items()
            if node.tier is Tier.TOP_LEVEL
        }
        queue = deque(fos_id for fos_id, d in indeg.items() if d == 0)
        best = 1 if level else 0
        while queue:
            node = queue.popleft()
            for child in snap.children.get(node, ()):
                if node in level:
                    cand = level[node] + 1
                    if cand > level.get(child, 0):
                        level[child] = cand
                        if cand > best:
                            best = cand
                indeg[child] -= 1
                if indeg[child] == 0:
                    queue.append(child)
        return best

    # -- publications ---------------------------------------------------------

    def add_publication(self, pub: Publication) -> None:
        """Insert or replace a publication; enforces one corpus-wide
        embedding dimension and non-negative citation counts."""
        self.add_publications([pub])

    def add_publications(self, batch: Iterable[Publication]) -> int:
        """Insert or replace many publications in one snapshot swap.
        The single-copy batch path is what keeps corpus loads linear."""
        with self._lock:
            snap = self._snap
            dim = snap.embedding_dim
            pubs = dict(snap.pubs)
            n = 0
            for pub in batch:
                if pub.citation_count < 0:
                    raise ValueError(f"negative citation count on {pub.id}")
                if pub.embedding is not None:
                    if dim is None:
                        dim = len(pub.embedding)
                    elif len(pub.embedding) != dim:
                        raise ValueError(
                            f"embedding dim {len(pub.embedding)} != corpus dim"
                            f" {dim} on {pub.id}")
                pubs[pub.id] = pub
                n += 1
            self._snap = replace(snap, pubs=pubs, embedding_dim=dim)
            return n

    def get_publication(self, pub_id: str) -> Publication:
        pub = self._snap.pubs.get(pub_id)
        if pub is None:
            raise UnknownId(f"no such publication: {pub_id}")
        return pub

    def has_publication(self, pub_id: str) -> bool:
        return pub_id in self._snap.pubs

    @property
    def embedding_dim(self) -> int | None:
        """Corpus-wide vector dimension, set by the first stored embedding."""
        return self._snap.embedding_dim

    def all_publications(self) -> list[Publication]:
        return sorted(self._snap.pubs.values(), key=lambda p: p.id)

    def update_publication(self, pub_id: str, **changes) -> Publication:
        with self._lock:
            snap = self._snap
            pub = snap.pubs.get(pub_id)
            if pub is None:
                raise UnknownId(f"no such publication: {pub_id}")
            pub = replace(pub, **changes)
            pubs = dict(snap.pubs)
            pubs[pub_id] = pub
            self._snap = replace(snap, pubs=pubs)
            return pub

    def attach_embeddings(self, vectors: Iterable[tuple[str, Sequence[float]]]) -> int:
        """Attach externally computed vectors; returns how many matched a
        stored publication."""
        updated = [
            replace(self.get_publication(pub_id),
                    embedding=tuple(float(x) for x in vec))
            for pub_id, vec in vectors
            if self.has_publication(pub_id)
        ]
        return self.add_publications(updated)

    def fulltext_of(self, pub_id: str) -> str | None:
        """Full text body, resolved relative to the store's base dir."""
        pub = self.get_publication(pub_id)
        if not pub.fulltext:
            return None
        path = Path(pub.fulltext)
        if not path.is_absolute() and self.base_dir is not None:
            path = self.base_dir / path
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    # -- persistence ------------------------------------------------------------

    def save(self, directory: Path | str) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        snap = self._snap
        with (directory / "fos_nodes.jsonl").open("w", encoding="utf-8") as fh:
            for node in sorted(snap.fos.values(), key=lambda n: n.id):
                fh.write(json.dumps(fos_to_json(node), ensure_ascii=False) + "\n")
        with (directory / "fos_edges.jsonl").open("w", encoding="utf-8") as fh:
            for child, parent in self.edges():
                fh.write(json.dumps({"child": child, "parent": parent}) + "\n")
        with (directory / "publications.jsonl").open("w", encoding="utf-8") as fh:
            for pub in self.all_publications():
                fh.write(json.dumps(pub_to_json(pub), ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, directory: Path | str) -> "GraphStore":
        directory = Path(directory)
        store = cls(base_dir=directory)
        nodes_path = directory / "fos_nodes.jsonl"
        if nodes_path.exists():
            for lineno, obj in _iter_jsonl(nodes_path):
                store.add_fos(fos_from_json(obj, lineno))
        edges_path = directory / "fos_edges.jsonl"
        if edges_path.exists():
            for lineno, obj in _iter_jsonl(edges_path):
                try:
                    store.add_hyponym(obj["child"], obj["parent"])
                except KeyError as exc:
                    raise ParseError(f"edge missing {exc}", lineno) from exc
        pubs_path = directory / "publications.jsonl"
        if pubs_path.exists():
            store.add_publications(
                pub_from_json(obj, lineno) for lineno, obj in _iter_jsonl(pubs_path))
        return store


# ---------------------------------------------------------------------------
# JSONL (de)serialization
# ---------------------------------------------------------------------------

def _iter_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(exc), lineno) from exc
            if not isinstance(obj, dict):
                raise ParseError("expected a JSON object", lineno)
            yield lineno, obj


def fos_to_json(node: FieldOfStudy) -> dict:
    obj = {
        "id": node.id,
        "name": node.name,
        "synonyms": sorted(node.synonyms),
        "tier": node.tier.value,
    }
    if node.description:
        obj["description"] = node.description
    return obj


def fos_from_json(obj: dict, lineno: int | None = None) -> FieldOfStudy:
    try:
        return FieldOfStudy(
            id=obj["id"],
            name=obj["name"],
            synonyms=frozenset(obj.get("synonyms", ())),
            description=obj.get("description"),
            tier=Tier(obj.get("tier", "extended")),
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad fos record: {exc}", lineno) from exc


def pub_to_json(pub: Publication) -> dict:
    obj = {
        "id": pub.id,
        "title": pub.title,
        "abstract": pub.abstract,
        "year": pub.year,
        "venue": pub.venue,
        "authors": list(pub.authors),
        "citation_count": pub.citation_count,
        "cited_ids": list(pub.cited_ids),
        "fos_ids": sorted(pub.fos_ids),
        "is_survey": pub.is_survey,
    }
    if pub.tldr is not None:
        obj["tldr"] = pub.tldr
    if pub.fulltext is not None:
        obj["fulltext"] = pub.fulltext
    if pub.embedding is not None:
        obj["embedding"] = list(pub.embedding)
    return obj


def pub_from_json(obj: dict, lineno: int | None = None) -> Publication:
    try:
        emb = obj.get("embedding")
        return Publication(
            id=obj["id"],
            title=obj["title"],
            abstract=obj.get("abstract", ""),
            year=int(obj.get("year", 0)),
            venue=obj.get("venue", ""),
            authors=tuple(obj.get("authors", ())),
            citation_count=int(obj.get("citation_count", 0)),
            cited_ids=tuple(obj.get("cited_ids", ())),
            tldr=obj.get("tldr"),
            fulltext=obj.get("fulltext"),
            fos_ids=frozenset(obj.get("fos_ids", ())),
            is_survey=bool(obj.get("is_survey", False)),
            embedding=tuple(float(x) for x in emb) if emb is not None else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad publication record: {exc}", lineno) from exc
