"""Completion and embedding providers.

The engine talks to any chat-completion-shaped HTTP endpoint: the
request is an ordered message list with sampling parameters, the
response a single text completion. Credentials come from the
LLM_API_KEY environment variable, never from config files.

For tests and offline runs there are two deterministic stand-ins: a
mock completion provider keyed by a hash of the exact message list, and
a hashed bag-of-tokens embedder that assigns stable vectors to text.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import httpx

from .errors import ProviderError
from .textnorm import stem_tokens

Message = dict[str, str]  # {"role": ..., "content": ...}


def prompt_hash(messages: Sequence[Message]) -> str:
    """Canonical digest of a message list; the key of the mock script."""
    blob = json.dumps(
        [{"role": m["role"], "content": m["content"]} for m in messages],
        sort_keys=True, ensure_ascii=False, separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ChatProvider(Protocol):
    def complete(self, messages: Sequence[Message]) -> str: ...


class EmbeddingProvider(Protocol):
    def embed(self, text: str) -> list[float]: ...


@dataclass
class ProviderConfig:
    base_url: str = ""
    model: str = ""
    temperature: float = 0.0
    api_key_env: str = "LLM_API_KEY"

    @classmethod
    def from_file(cls, path: Path | str) -> "ProviderConfig":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            base_url=obj.get("base_url", ""),
            model=obj.get("model", ""),
            temperature=float(obj.get("temperature", 0.0)),
            api_key_env=obj.get("api_key_env", "LLM_API_KEY"),
        )


class HttpChatProvider:
    """POSTs {model, messages, temperature} as JSON and reads back a
    single completion. Accepts both a bare {"content": ...} body and the
    common nested choices/message shape."""

    def __init__(self, config: ProviderConfig, timeout: float = 60.0):
        self.config = config
        self.timeout = timeout

    def complete(self, messages: Sequence[Message]) -> str:
        headers = {}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = httpx.post(
                self.config.base_url,
                json={
                    "model": self.config.model,
                    "messages": list(messages),
                    "temperature": self.config.temperature,
                },
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
        except httpx.HTTPError as exc:
            raise ProviderError(f"completion request failed: {exc}") from exc
        return _extract_completion(body)


def _extract_completion(body) -> str:
    if isinstance(body, dict):
        if isinstance(body.get("content"), str):
            return body["content"]
        choices = body.get("choices")
        if isinstance(choices, list) and choices:
            msg = choices[0].get("message", {})
            if isinstance(msg.get("content"), str):
                return msg["content"]
    raise ProviderError(f"unrecognized completion response shape: {body!r:.200}")


class MockChatProvider:
    """Bit-deterministic provider: replies come from a prompt-hash -> text
    script. Unknown prompts raise ProviderError unless a default is set."""

    def __init__(self, script: dict[str, str] | None = None, default: str | None = None):
        self.script = dict(script or {})
        self.default = default
        self.calls: list[list[Message]] = []  # inspection hook for tests

    @classmethod
    def from_file(cls, path: Path | str) -> "MockChatProvider":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        default = obj.pop("__default__", None)
        return cls(script=obj, default=default)

    def add(self, messages: Sequence[Message], reply: str) -> None:
        self.script[prompt_hash(messages)] = reply

    def complete(self, messages: Sequence[Message]) -> str:
        self.calls.append([dict(m) for m in messages])
        reply = self.script.get(prompt_hash(messages), self.default)
        if reply is None:
            raise ProviderError(
                f"mock has no reply for prompt hash {prompt_hash(messages)}")
        return reply


class HttpEmbeddingProvider:
    """Same wire shape as the completion client, for services that return
    {"embedding": [...]} or {"data": [{"embedding": [...]}]}."""

    def __init__(self, config: ProviderConfig, timeout: float = 60.0):
        self.config = config
        self.timeout = timeout

    def embed(self, text: str) -> list[float]:
        headers = {}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = httpx.post(
                self.config.base_url,
                json={"model": self.config.model, "input": text},
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
        except httpx.HTTPError as exc:
            raise ProviderError(f"embedding request failed: {exc}") from exc
        if isinstance(body, dict):
            if isinstance(body.get("embedding"), list):
                return [float(x) for x in body["embedding"]]
            data = body.get("data")
            if isinstance(data, list) and data and isinstance(data[0].get("embedding"), list):
                return [float(x) for x in data[0]["embedding"]]
        raise ProviderError(f"unrecognized embedding response shape: {body!r:.200}")


class HashEmbedder:
    """Deterministic local embedder: every stemmed token scatters a signed
    unit bump into a fixed-dimension vector via its digest, then the sum
    is L2-normalized. Purely lexical, but stable across platforms, which
    is what fixtures and offline runs need."""

    def __init__(self, dim: int = 32):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.dim = dim

    def embed(self, text: str) -> list[float]:
        vec = [0.0] * self.dim
        for token in stem_tokens(text):
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            idx = int.from_bytes(digest[:4], "big") % self.dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[idx] += sign
        norm = sum(x * x for x in vec) ** 0.5
        if norm > 0:
            vec = [x / norm for x in vec]
        return vec
