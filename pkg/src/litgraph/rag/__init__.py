from .context import format_context, split_sentences, truncate_to_budget
from .grounding import grounding_check, markers_valid, parse_markers
from .pipeline import (
    MAX_TERMS,
    ROUTE_NEW_SEARCH,
    ROUTE_REUSE,
    ChatEngine,
    RagConfig,
)
from .sessions import ChatMessage, ChatSession, SessionStore, iter_session_files
from .types import AskPaperResult, GroundedAnswer, GroundingReport, SupportStatement

__all__ = [
    "AskPaperResult",
    "ChatEngine",
    "ChatMessage",
    "ChatSession",
    "GroundedAnswer",
    "GroundingReport",
    "MAX_TERMS",
    "ROUTE_NEW_SEARCH",
    "ROUTE_REUSE",
    "RagConfig",
    "SessionStore",
    "SupportStatement",
    "format_context",
    "grounding_check",
    "iter_session_files",
    "markers_valid",
    "parse_markers",
    "split_sentences",
    "truncate_to_budget",
]
