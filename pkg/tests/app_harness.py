"""Deterministic app construction shared by the API tests and the
golden-file generator (tools/make_golden.py).

Fixed clock, counter-based session ids, and a mock provider script
derived from the fixture corpus make every response byte-stable.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from litgraph.config import AppConfig, AppContext
from litgraph.providers import MockChatProvider
from litgraph.rag import RagConfig, SessionStore, format_context, truncate_to_budget
from litgraph.rag.prompts import answer_prompt, ask_paper_prompt, search_terms_prompt
from litgraph.search import SearchConfig

FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

DOC_BUDGET = 2000

CHAT_TEXT = "What helps translation quality in low resource settings?"
CHAT_TERMS = "low resource machine translation\nback-translation"
CHAT_ANSWER = (
    "Back-translation reliably helps when parallel data is scarce [1]. "
    "Multilingual transfer adds further gains [2]."
)
ASK_PUB = "p002"
ASK_PREDEFINED = 2
ASK_REPLY = """ANSWER:
The paper organizes neural translation methods and compares their training recipes [1].
SUPPORT:
- [Section: Method | Page: 3] The approach builds on standard encoders.
- [Section: Experiments | Page: 5] Gains hold under matched compute budgets.
FOLLOW-UPS:
1. Which architectures does it cover?
2. How is evaluation performed?
3. What open problems does it list?
"""


def fixed_clock() -> str:
    return "2024-01-01T00:00:00+00:00"


def counter_ids():
    count = itertools.count(1)
    return lambda: f"s{next(count):04d}"


def make_config(sessions_dir: Path) -> AppConfig:
    return AppConfig(
        data_dir=FIXTURES / "corpus",
        sessions_dir=sessions_dir,
        search=SearchConfig(page_size=10, rerank_top_k=100),
        rag=RagConfig(doc_budget=DOC_BUDGET),
    )


def make_context(sessions_dir: Path) -> AppContext:
    provider = MockChatProvider()
    sessions = SessionStore(
        directory=sessions_dir, id_factory=counter_ids(), clock=fixed_clock)
    ctx = AppContext.build(make_config(sessions_dir), provider=provider,
                           sessions=sessions)
    provider.script.update(build_script(ctx))
    return ctx


def build_script(ctx: AppContext) -> dict[str, str]:
    """Mock replies for the golden conversation and ask-paper call, keyed
    by the exact prompts the pipeline will send."""
    script: dict[str, str] = {}

    def add(messages, reply):
        from litgraph.providers import prompt_hash

        script[prompt_hash(messages)] = reply

    add(search_terms_prompt(CHAT_TEXT, []), CHAT_TERMS)
    terms = CHAT_TERMS.splitlines()
    doc_ids = ctx.search.retrieve(" ".join(terms)).ids()[:5]
    docs = []
    for pid in doc_ids:
        pub = ctx.store.get_publication(pid)
        body = ctx.store.fulltext_of(pid) or pub.abstract or pub.tldr or ""
        docs.append((pid, pub.title, truncate_to_budget(body, DOC_BUDGET)))
    add(answer_prompt(CHAT_TEXT, format_context(docs)), CHAT_ANSWER)

    pub = ctx.store.get_publication(ASK_PUB)
    body = truncate_to_budget(ctx.store.fulltext_of(ASK_PUB), DOC_BUDGET)
    question = ctx.chat.config.predefined_questions[ASK_PREDEFINED]
    add(ask_paper_prompt(pub.title, body, question), ASK_REPLY)
    return script
