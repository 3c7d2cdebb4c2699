"""Context packing under a character budget.

Document slices are cut at paragraph boundaries, falling back to whole
sentences when even the first paragraph would overflow; a slice never
ends mid-sentence and headers are never dropped.
"""

from __future__ import annotations

import re

DEFAULT_DOC_BUDGET = 24_000
TOP_DOCS = 5

_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")
_PARAGRAPH_RE = re.compile(r"\n\s*\n")


def split_sentences(text: str) -> list[str]:
    parts = [s.strip() for s in _SENTENCE_RE.split(text)]
    return [s for s in parts if s]


def truncate_to_budget(text: str, budget: int) -> str:
    """Longest prefix of whole paragraphs within `budget` characters;
    if the first paragraph alone overflows, whole sentences of it."""
    text = text.strip()
    if len(text) <= budget:
        return text
    kept: list[str] = []
    used = 0
    for para in _PARAGRAPH_RE.split(text):
        para = para.strip()
        if not para:
            continue
        cost = len(para) + (2 if kept else 0)
        if used + cost > budget:
            break
        kept.append(para)
        used += cost
    if kept:
        return "\n\n".join(kept)
    sentences = []
    used = 0
    first_para = _PARAGRAPH_RE.split(text)[0]
    for sent in split_sentences(first_para):
        cost = len(sent) + (1 if sentences else 0)
        if used + cost > budget:
            break
        sentences.append(sent)
        used += cost
    return " ".join(sentences)


def format_context(docs: list[tuple[str, str, str]]) -> str:
    """Numbered context block from (pub_id, title, body_slice) entries.
    The [n] headers are what answer citations refer back to."""
    blocks = []
    for i, (_, title, body) in enumerate(docs, start=1):
        blocks.append(f"[{i}] {title}\n{body}".rstrip())
    return "\n\n".join(blocks)
