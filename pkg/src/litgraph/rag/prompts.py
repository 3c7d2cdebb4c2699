"""Prompt builders for every provider call.

All builders are pure functions of their inputs, so tests can reproduce
the exact message list, hash it, and script the mock provider's reply.
"""

from __future__ import annotations

from ..providers import Message

MAX_HISTORY_TURNS = 6

# the single worked example for search-term generation (one-shot)
_TERM_EXAMPLE_QUESTION = (
    "How do models deal with negation when classifying sentiment?"
)
_TERM_EXAMPLE_REPLY = "sentiment analysis negation\nnegation handling classifiers"

DEFAULT_PREDEFINED_QUESTIONS = {
    1: "What is the main contribution?",
    2: "What methods are used?",
    3: "What are the key results?",
}


def search_terms_prompt(query: str, history: list[Message]) -> list[Message]:
    """Term-generation prompt: instructions, exactly one worked example,
    then the (history-aware) question. Reply contract: one search term
    per line, between one and five lines, nothing else."""
    messages: list[Message] = [
        {
            "role": "system",
            "content": (
                "You turn a research question into search terms for a "
                "scholarly search engine. Reply with one search term per "
                "line, between one and five lines, and nothing else."
            ),
        },
        {"role": "user", "content": f"Question: {_TERM_EXAMPLE_QUESTION}"},
        {"role": "assistant", "content": _TERM_EXAMPLE_REPLY},
    ]
    parts = []
    for msg in history[-MAX_HISTORY_TURNS:]:
        parts.append(f"{msg['role']}: {msg['content']}")
    context = ("Conversation so far:\n" + "\n".join(parts) + "\n\n") if parts else ""
    messages.append({"role": "user", "content": f"{context}Question: {query}"})
    return messages


def answer_prompt(query: str, context_block: str) -> list[Message]:
    """Grounded-answer prompt over a numbered context block."""
    return [
        {
            "role": "system",
            "content": (
                "You answer research questions using only the numbered "
                "source documents provided. Cite sources inline with "
                "square-bracketed numbers like [1] that refer to the "
                "document headers. Every claim should carry a citation. "
                "Do not cite numbers that are not in the context."
            ),
        },
        {
            "role": "user",
            "content": f"Sources:\n\n{context_block}\n\nQuestion: {query}",
        },
    ]


def retry_note(previous_reply: str, problem: str) -> Message:
    """Correction turn appended when a reply violates its contract."""
    return {
        "role": "user",
        "content": (
            f"Your previous reply was:\n{previous_reply}\n\n"
            f"It was rejected: {problem} Reply again, following the "
            "required format exactly."
        ),
    }


def route_prompt(query: str, history: list[Message]) -> list[Message]:
    """Follow-up routing: constrained one-word reply, REUSE or SEARCH."""
    parts = [f"{m['role']}: {m['content']}" for m in history[-MAX_HISTORY_TURNS:]]
    return [
        {
            "role": "system",
            "content": (
                "Decide whether the follow-up question can be answered "
                "from the documents already retrieved in this "
                "conversation, or needs a fresh search. Reply with "
                "exactly one word: REUSE or SEARCH."
            ),
        },
        {
            "role": "user",
            "content": "Conversation so far:\n" + "\n".join(parts)
            + f"\n\nFollow-up question: {query}",
        },
    ]


def ask_paper_prompt(title: str, body_slice: str, question: str) -> list[Message]:
    """Single-paper Q&A with a strict structured reply format."""
    return [
        {
            "role": "system",
            "content": (
                "You answer questions about one specific paper using only "
                "its text below. Reply in exactly this format:\n"
                "ANSWER:\n<the answer>\n"
                "SUPPORT:\n"
                "- [Section: <section name> | Page: <page number>] <supporting statement>\n"
                "(one or more such lines)\n"
                "FOLLOW-UPS:\n"
                "1. <follow-up question>\n2. <follow-up question>\n3. <follow-up question>\n"
                "The three follow-up questions must be distinct."
            ),
        },
        {
            "role": "user",
            "content": f"[1] {title}\n{body_slice}\n\nQuestion: {question}",
        },
    ]


def fos_description_prompt(name: str, parent_names: list[str]) -> list[Message]:
    """Short description generation for a hierarchy node."""
    parents = ", ".join(parent_names) if parent_names else "none"
    return [
        {
            "role": "system",
            "content": (
                "Write a plain-language description of a research field in "
                "at most two sentences. Reply with the description only."
            ),
        },
        {
            "role": "user",
            "content": f"Field: {name}\nParent fields: {parents}",
        },
    ]
