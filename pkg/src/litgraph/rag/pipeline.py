"""Provider-orchestrated conversational search and single-paper Q&A."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import MalformedReply, NoFullText, UngroundedCitation
from ..kgstore import GraphStore
from ..providers import ChatProvider
from ..search import SearchEngine
from .context import DEFAULT_DOC_BUDGET, TOP_DOCS, format_context, truncate_to_budget
from .grounding import markers_valid, parse_markers
from .prompts import (
    DEFAULT_PREDEFINED_QUESTIONS,
    answer_prompt,
    ask_paper_prompt,
    fos_description_prompt,
    retry_note,
    route_prompt,
    search_terms_prompt,
)
from .sessions import ChatMessage, ChatSession, SessionStore
from .types import AskPaperResult, GroundedAnswer, SupportStatement
from .context import split_sentences

ROUTE_REUSE = "reuse_context"
ROUTE_NEW_SEARCH = "new_search"

MAX_TERMS = 5

_SUPPORT_RE = re.compile(
    r"^-\s*\[Section:\s*(?P<section>.+?)\s*\|\s*Page:\s*(?P<page>\d+)\]\s*(?P<stmt>.+)$"
)
_FOLLOWUP_RE = re.compile(r"^\d+[.)]\s*(?P<q>.+)$")


@dataclass(frozen=True)
class RagConfig:
    doc_budget: int = DEFAULT_DOC_BUDGET
    top_docs: int = TOP_DOCS
    predefined_questions: dict[int, str] = field(
        default_factory=lambda: dict(DEFAULT_PREDEFINED_QUESTIONS))


class ChatEngine:
    def __init__(
        self,
        store: GraphStore,
        search: SearchEngine,
        provider: ChatProvider,
        sessions: SessionStore | None = None,
        config: RagConfig | None = None,
    ):
        self.store = store
        self.search = search
        self.provider = provider
        self.sessions = sessions or SessionStore()
        self.config = config or RagConfig()

    # -- term generation -----------------------------------------------------

    def generate_search_terms(self, query: str, history: list[dict]) -> list[str]:
        """1-5 search terms from the provider (one per line); falls back
        to the raw query when the reply yields none."""
        if not query.strip():
            raise ValueError("empty query")
        reply = self.provider.complete(search_terms_prompt(query, history))
        terms = [line.strip() for line in reply.splitlines() if line.strip()]
        if not terms:
            return [query]
        return terms[:MAX_TERMS]

    # -- follow-up routing ---------------------------------------------------

    def route_followup(self, query: str, session: ChatSession) -> str:
        """REUSE/SEARCH decision; anything unparseable falls back to a new
        search. Never calls the provider when there is nothing to reuse."""
        if not session.messages or not session.retrieved_docs:
            return ROUTE_NEW_SEARCH
        reply = self.provider.complete(route_prompt(query, session.history()))
        word = reply.strip().split()[0].upper() if reply.strip() else ""
        if word == "REUSE":
            return ROUTE_REUSE
        return ROUTE_NEW_SEARCH

    # -- conversational search -------------------------------------------------

    def retrieve_for_terms(self, terms: list[str]) -> list[str]:
        """Top document ids the answer will be grounded in: the search
        module's ranking for the joined terms."""
        ranked = self.search.retrieve(" ".join(terms))
        return ranked.ids()[: self.config.top_docs]

    def _doc_slice(self, pub_id: str) -> tuple[str, str, str]:
        pub = self.store.get_publication(pub_id)
        body = self.store.fulltext_of(pub_id) or pub.abstract or pub.tldr or ""
        return pub_id, pub.title, truncate_to_budget(body, self.config.doc_budget)

    def conversational_answer(self, query: str, session: ChatSession) -> GroundedAnswer:
        """Answer grounded in retrieved documents, with validated inline
        citations; the session transcript records every round. Turns on
        the same session are serialized."""
        with self.sessions.lock_for(session.session_id):
            return self._answer_locked(query, session)

    def _answer_locked(self, query: str, session: ChatSession) -> GroundedAnswer:
        route = self.route_followup(query, session)
        if route == ROUTE_NEW_SEARCH:
            terms = self.generate_search_terms(query, session.history())
            doc_ids = self.retrieve_for_terms(terms)
            docs = [self._doc_slice(pub_id) for pub_id in doc_ids]
            self.sessions.record_retrieval(
                session, [(pid, body) for pid, _, body in docs], terms)
        else:
            docs = [
                (pid, self.store.get_publication(pid).title, body)
                for pid, body in session.retrieved_docs
            ]

        messages = answer_prompt(query, format_context(docs))
        reply = self.provider.complete(messages)
        if not markers_valid(reply, len(docs)):
            retry = messages + [retry_note(
                reply, f"it cited a source outside [1..{len(docs)}].")]
            reply = self.provider.complete(retry)
            if not markers_valid(reply, len(docs)):
                raise UngroundedCitation(
                    f"reply cites outside the {len(docs)} retrieved documents")

        citations = {m: docs[m - 1][0] for m in sorted(set(parse_markers(reply)))}
        answer = GroundedAnswer(text=reply, citations=citations)
        self.sessions.record_message(session, ChatMessage(role="user", content=query))
        self.sessions.record_message(session, ChatMessage(
            role="assistant", content=reply,
            citations=citations, n_docs=len(docs),
        ))
        return answer

    # -- single-paper Q&A -----------------------------------------------------

    def ask_paper(
        self,
        pub_id: str,
        question: str | None = None,
        predefined_id: int | None = None,
    ) -> AskPaperResult:
        """Structured answer about one publication from its full text,
        with section/page support statements and three distinct follow-up
        questions."""
        if (question is None) == (predefined_id is None):
            raise ValueError("pass exactly one of question / predefined_id")
        if predefined_id is not None:
            try:
                question = self.config.predefined_questions[predefined_id]
            except KeyError:
                raise ValueError(f"unknown predefined question {predefined_id}")
        pub = self.store.get_publication(pub_id)
        body = self.store.fulltext_of(pub_id)
        if not body:
            raise NoFullText(f"{pub_id} has no full text")
        body = truncate_to_budget(body, self.config.doc_budget)

        messages = ask_paper_prompt(pub.title, body, question)
        reply = self.provider.complete(messages)
        try:
            text, supports, followups = _parse_and_check_ask_reply(reply)
        except MalformedReply as exc:
            retry = messages + [retry_note(reply, f"{exc}.")]
            reply = self.provider.complete(retry)
            text, supports, followups = _parse_and_check_ask_reply(reply)

        citations = {m: pub_id for m in parse_markers(text)}
        answer = GroundedAnswer(text=text, citations=citations, supports=supports)
        return AskPaperResult(answer=answer, followups=followups)

    # -- hierarchy descriptions ----------------------------------------------

    def generate_fos_description(self, fos_id: str, force: bool = False) -> str | None:
        """Generate and store a short description; returns None when the
        node already has one and force is unset."""
        node = self.store.get_fos(fos_id)
        if node.description and not force:
            return None
        parents = [self.store.get_fos(p).name for p in self.store.parents_of(fos_id)]
        reply = self.provider.complete(fos_description_prompt(node.name, parents))
        text = " ".join(split_sentences(reply.strip())[:2])
        self.store.set_description(fos_id, text, force=True)
        return text

    def describe_all_fos(self, force: bool = False) -> int:
        """Fill in missing descriptions in node-id order; returns how many
        were written."""
        written = 0
        for node in self.store.all_fos():
            if self.generate_fos_description(node.id, force=force) is not None:
                written += 1
        return written


def _parse_and_check_ask_reply(
    reply: str,
) -> tuple[str, tuple[SupportStatement, ...], tuple[str, str, str]]:
    """Parse plus the single-document citation check: the context holds
    exactly one paper, so any marker other than [1] is ungrounded."""
    text, supports, followups = _parse_ask_reply(reply)
    if not markers_valid(text, 1):
        raise MalformedReply("the answer cites a source other than [1]")
    return text, supports, followups


def _parse_ask_reply(
    reply: str,
) -> tuple[str, tuple[SupportStatement, ...], tuple[str, str, str]]:
    section = None
    answer_lines: list[str] = []
    supports: list[SupportStatement] = []
    followups: list[str] = []
    for raw in reply.splitlines():
        line = raw.strip()
        if line == "ANSWER:" or line.startswith("ANSWER:"):
            section = "answer"
            rest = line[len("ANSWER:"):].strip()
            if rest:
                answer_lines.append(rest)
            continue
        if line == "SUPPORT:":
            section = "support"
            continue
        if line == "FOLLOW-UPS:":
            section = "followups"
            continue
        if not line:
            continue
        if section == "answer":
            answer_lines.append(line)
        elif section == "support":
            m = _SUPPORT_RE.match(line)
            if not m:
                raise MalformedReply(f"unparseable support line: {line!r}")
            supports.append(SupportStatement(
                section=m.group("section"),
                page=int(m.group("page")),
                statement=m.group("stmt"),
            ))
        elif section == "followups":
            m = _FOLLOWUP_RE.match(line)
            if m:
                followups.append(m.group("q").strip())

    text = "\n".join(answer_lines).strip()
    if not text:
        raise MalformedReply("reply has no ANSWER section")
    if len(followups) != 3:
        raise MalformedReply(f"expected 3 follow-up questions, got {len(followups)}")
    if len(set(followups)) != 3:
        raise MalformedReply("follow-up questions must be pairwise distinct")
    return text, tuple(supports), (followups[0], followups[1], followups[2])
