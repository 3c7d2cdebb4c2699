"""Chat sessions and their JSONL transcript persistence.

One file per session under the sessions directory; each line is either
the meta record, a retrieval round, or a message. Files replay in order
to reconstruct the in-memory session.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from ..errors import UnknownId


@dataclass
class ChatMessage:
    role: str  # "user" | "assistant"
    content: str
    citations: dict[int, str] = field(default_factory=dict)
    n_docs: int = 0  # size of the retrieved set this message was grounded in


@dataclass
class ChatSession:
    session_id: str
    created_at: str
    updated_at: str
    messages: list[ChatMessage] = field(default_factory=list)
    retrieved_docs: list[tuple[str, str]] = field(default_factory=list)  # (pub id, slice)

    def history(self) -> list[dict[str, str]]:
        return [{"role": m.role, "content": m.content} for m in self.messages]


class SessionStore:
    """In-memory sessions with optional on-disk transcripts."""

    def __init__(
        self,
        directory: Path | str | None = None,
        id_factory: Callable[[], str] | None = None,
        clock: Callable[[], str] | None = None,
    ):
        self.directory = Path(directory) if directory else None
        self._id_factory = id_factory or self._default_ids()
        self._clock = clock or _utc_now
        self._sessions: dict[str, ChatSession] = {}
        self._order: list[str] = []  # creation order
        self._lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.directory.glob("*.jsonl")):
                session = _replay(path)
                self._sessions[session.session_id] = session
                self._order.append(session.session_id)

    @staticmethod
    def _default_ids() -> Callable[[], str]:
        import uuid

        return lambda: uuid.uuid4().hex[:12]

    def create(self) -> ChatSession:
        with self._lock:
            session_id = self._id_factory()
            now = self._clock()
            session = ChatSession(session_id=session_id, created_at=now, updated_at=now)
            self._sessions[session_id] = session
            self._order.append(session_id)
            self._write_event(session_id, {
                "type": "meta", "session_id": session_id, "created_at": now,
            })
            return session

    def get(self, session_id: str) -> ChatSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownId(f"no such session: {session_id}")
        return session

    def lock_for(self, session_id: str) -> threading.Lock:
        """Per-session lock; operations on one session are serialized
        while different sessions proceed concurrently."""
        with self._lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def list_sessions(self) -> list[ChatSession]:
        """Newest first."""
        return [self._sessions[sid] for sid in reversed(self._order)]

    def record_retrieval(
        self, session: ChatSession, docs: list[tuple[str, str]], terms: list[str],
    ) -> None:
        session.retrieved_docs = list(docs)
        session.updated_at = self._clock()
        self._write_event(session.session_id, {
            "type": "retrieval",
            "terms": terms,
            "docs": [{"pub_id": pid, "text": text} for pid, text in docs],
            "at": session.updated_at,
        })

    def record_message(self, session: ChatSession, message: ChatMessage) -> None:
        session.messages.append(message)
        session.updated_at = self._clock()
        self._write_event(session.session_id, {
            "type": "message",
            "role": message.role,
            "content": message.content,
            "citations": {str(k): v for k, v in message.citations.items()},
            "n_docs": message.n_docs,
            "at": session.updated_at,
        })

    def _write_event(self, session_id: str, event: dict) -> None:
        if self.directory is None:
            return
        path = self.directory / f"{session_id}.jsonl"
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")


def _utc_now() -> str:
    from datetime import datetime, timezone

    return datetime.now(timezone.utc).isoformat()


def _replay(path: Path) -> ChatSession:
    session = ChatSession(session_id=path.stem, created_at="", updated_at="")
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            event = json.loads(line)
            kind = event.get("type")
            if kind == "meta":
                session.created_at = event.get("created_at", "")
                session.updated_at = session.created_at
            elif kind == "retrieval":
                session.retrieved_docs = [
                    (d["pub_id"], d.get("text", "")) for d in event.get("docs", ())
                ]
                session.updated_at = event.get("at", session.updated_at)
            elif kind == "message":
                session.messages.append(ChatMessage(
                    role=event["role"],
                    content=event["content"],
                    citations={int(k): v for k, v in event.get("citations", {}).items()},
                    n_docs=int(event.get("n_docs", 0)),
                ))
                session.updated_at = event.get("at", session.updated_at)
    return session


def iter_session_files(directory: Path | str) -> Iterator[ChatSession]:
    for path in sorted(Path(directory).glob("*.jsonl")):
        yield _replay(path)
