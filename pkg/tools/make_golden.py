"""Regenerate the golden API response files. Deterministic; outputs are
committed under tests/golden/.

Usage: python tools/make_golden.py
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from litgraph.api import create_app  # noqa: E402

from app_harness import (  # noqa: E402
    ASK_PREDEFINED,
    ASK_PUB,
    CHAT_TEXT,
    GOLDEN,
    make_context,
)


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        ctx = make_context(Path(tmp) / "sessions")
        client = TestClient(create_app(ctx))

        resp = client.get("/search", params={"q": "machine translation",
                                             "survey": "true"})
        assert resp.status_code == 200, resp.content
        (GOLDEN / "search.json").write_bytes(resp.content)

        resp = client.get("/fos/machine-translation/subgraph", params={"depth": 1})
        assert resp.status_code == 200, resp.content
        (GOLDEN / "subgraph.json").write_bytes(resp.content)

        sid = client.post("/chat/sessions").json()["session_id"]
        resp = client.post(f"/chat/sessions/{sid}/messages",
                           json={"text": CHAT_TEXT})
        assert resp.status_code == 200, resp.content
        (GOLDEN / "chat_message.json").write_bytes(resp.content)

        resp = client.post(f"/publication/{ASK_PUB}/ask",
                           json={"predefined_id": ASK_PREDEFINED})
        assert resp.status_code == 200, resp.content
        (GOLDEN / "ask.json").write_bytes(resp.content)

    for name in ("search.json", "subgraph.json", "chat_message.json", "ask.json"):
        print(f"wrote tests/golden/{name} ({(GOLDEN / name).stat().st_size} bytes)")


if __name__ == "__main__":
    main()
