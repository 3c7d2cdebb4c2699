"""HTTP service over the snapshot: the contract the web UI consumes.

All endpoints are read-only except chat and ask; ingestion and index
builds happen through the CLI against the same on-disk snapshot.
Responses are plain JSON built in a fixed field order, so a fixed
snapshot plus the mock provider yields byte-stable bodies.
"""

from __future__ import annotations

from typing import Annotated

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import AppContext
from .errors import (
    EmptyQuery,
    MalformedReply,
    NoFullText,
    ProviderError,
    UngroundedCitation,
    UnknownId,
)
from .kgstore import FieldOfStudy, Publication
from .search import FilterSpec, compute_facets


def _pub_summary(pub: Publication, score: float | None = None) -> dict:
    obj = {
        "id": pub.id,
        "title": pub.title,
        "year": pub.year,
        "venue": pub.venue,
        "authors": list(pub.authors),
        "citation_count": pub.citation_count,
        "is_survey": pub.is_survey,
        "tldr": pub.tldr,
        "fos_ids": sorted(pub.fos_ids),
    }
    if score is not None:
        obj["score"] = round(score, 9)
    return obj


def _fos_summary(node: FieldOfStudy) -> dict:
    return {
        "id": node.id,
        "name": node.name,
        "synonyms": sorted(node.synonyms),
        "description": node.description,
        "tier": node.tier.value,
    }


def _facets_json(facets) -> dict:
    return {
        "years": [[year, n] for year, n in facets.year_histogram],
        "fos": [[fos_id, n] for fos_id, n in facets.top_fos],
        "authors": [[author, n] for author, n in facets.top_authors],
    }


def _parse_filters(
    fos: list[str], venue: list[str],
    year_from: int | None, year_to: int | None,
    min_citations: int | None, survey: bool,
) -> FilterSpec:
    year_range = None
    if year_from is not None or year_to is not None:
        year_range = (year_from if year_from is not None else -10_000,
                      year_to if year_to is not None else 10_000)
    return FilterSpec(
        fos_ids=frozenset(fos) if fos else None,
        venue_ids=frozenset(venue) if venue else None,
        year_range=year_range,
        min_citations=min_citations,
        survey_only=survey,
    )


def create_app(ctx: AppContext) -> FastAPI:
    app = FastAPI(title="litgraph", version="0.1.0")
    if ctx.config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=ctx.config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(UnknownId)
    async def _unknown(request: Request, exc: UnknownId):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(EmptyQuery)
    async def _empty(request: Request, exc: EmptyQuery):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(NoFullText)
    async def _nofulltext(request: Request, exc: NoFullText):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(ProviderError)
    async def _provider(request: Request, exc: ProviderError):
        return JSONResponse(status_code=502, content={"error": str(exc)})

    @app.exception_handler(UngroundedCitation)
    async def _ungrounded(request: Request, exc: UngroundedCitation):
        return JSONResponse(status_code=502, content={"error": str(exc)})

    @app.exception_handler(MalformedReply)
    async def _malformed(request: Request, exc: MalformedReply):
        return JSONResponse(status_code=502, content={"error": str(exc)})

    @app.get("/health")
    def health():
        stats = ctx.store.stats()
        return {
            "fos": stats.n_fos,
            "edges": stats.n_hyponym_edges,
            "max_depth": stats.max_depth,
            "publications": len(ctx.store.all_publications()),
        }

    @app.get("/search")
    def search(
        q: str = "",
        fos: Annotated[list[str] | None, Query()] = None,
        venue: Annotated[list[str] | None, Query()] = None,
        year_from: int | None = None,
        year_to: int | None = None,
        from_: Annotated[int | None, Query(alias="from")] = None,
        to: int | None = None,
        min_citations: int | None = None,
        survey: bool = False,
        page: Annotated[int, Query(ge=1)] = 1,
        page_size: Annotated[int | None, Query(ge=1, le=100)] = None,
    ):
        if not q.strip():
            return JSONResponse(status_code=400, content={"error": "missing query"})
        filters = _parse_filters(
            fos or [], venue or [],
            year_from if year_from is not None else from_,
            year_to if year_to is not None else to,
            min_citations, survey)
        result = ctx.search.search(q, filters=filters, page=page,
                                   page_size=page_size)
        return {
            "query": q,
            "page": result.page,
            "page_size": result.page_size,
            "total": result.total,
            "results": [
                _pub_summary(ctx.store.get_publication(pub_id), score)
                for pub_id, score in result.results
            ],
            "facets": _facets_json(result.facets),
        }

    @app.get("/fos/{fos_id}")
    def fos_detail(
        fos_id: str,
        year_from: int | None = None,
        year_to: int | None = None,
        survey: bool = False,
        page: Annotated[int, Query(ge=1)] = 1,
        page_size: Annotated[int, Query(ge=1, le=100)] = 20,
    ):
        node = ctx.store.get_fos(fos_id)
        filters = _parse_filters([], [], year_from, year_to, None, survey)
        member_ids = [
            p.id for p in ctx.store.all_publications() if fos_id in p.fos_ids
        ]
        kept = [
            pid for pid in member_ids
            if filters.is_empty()
            or _matches_pub(ctx.store.get_publication(pid), filters)
        ]
        facets = compute_facets(kept, ctx.store)
        start = (page - 1) * page_size
        return {
            "fos": _fos_summary(node),
            "parents": [
                _fos_summary(ctx.store.get_fos(p))
                for p in ctx.store.parents_of(fos_id)
            ],
            "children": [
                _fos_summary(ctx.store.get_fos(c))
                for c in ctx.store.children_of(fos_id)
            ],
            "ideal_steps": _ideal_or_none(ctx, fos_id),
            "total_publications": len(kept),
            "publications": [
                _pub_summary(ctx.store.get_publication(pid))
                for pid in kept[start : start + page_size]
            ],
            "facets": _facets_json(facets),
        }

    @app.get("/fos/{fos_id}/subgraph")
    def fos_subgraph(fos_id: str, depth: int = 1):
        if depth < 0:
            return JSONResponse(status_code=400, content={"error": "depth must be >= 0"})
        sub = ctx.store.subgraph(fos_id, depth)
        return {
            "root": fos_id,
            "depth": depth,
            "nodes": [_fos_summary(n) for n in sub.nodes],
            "edges": [{"child": c, "parent": p} for c, p in sub.edges],
        }

    @app.get("/publication/{pub_id}")
    def publication_detail(pub_id: str):
        pub = ctx.store.get_publication(pub_id)
        obj = _pub_summary(pub)
        obj["abstract"] = pub.abstract
        obj["cited_ids"] = list(pub.cited_ids)
        obj["has_fulltext"] = ctx.store.fulltext_of(pub_id) is not None
        return obj

    @app.post("/publication/{pub_id}/ask")
    async def ask_paper(pub_id: str, request: Request):
        body = await request.json()
        question = body.get("question")
        predefined_id = body.get("predefined_id")
        if (question is None) == (predefined_id is None):
            return JSONResponse(
                status_code=400,
                content={"error": "pass exactly one of question / predefined_id"})
        result = ctx.chat.ask_paper(
            pub_id, question=question,
            predefined_id=int(predefined_id) if predefined_id is not None else None,
        )
        return {
            "answer": result.answer.text,
            "citations": {str(k): v for k, v in result.answer.citations.items()},
            "supports": [
                {"section": s.section, "page": s.page, "statement": s.statement}
                for s in result.answer.supports
            ],
            "followups": list(result.followups),
        }

    @app.get("/chat/predefined")
    def predefined_questions():
        return {
            "questions": [
                {"id": k, "text": v}
                for k, v in sorted(ctx.chat.config.predefined_questions.items())
            ],
        }

    @app.post("/chat/sessions", status_code=201)
    def create_session():
        session = ctx.sessions.create()
        return {"session_id": session.session_id, "created_at": session.created_at}

    @app.get("/chat/sessions")
    def list_sessions():
        return {
            "sessions": [
                {
                    "session_id": s.session_id,
                    "created_at": s.created_at,
                    "updated_at": s.updated_at,
                    "n_messages": len(s.messages),
                    "title": next(
                        (m.content[:80] for m in s.messages if m.role == "user"), ""),
                }
                for s in ctx.sessions.list_sessions()
            ],
        }

    @app.get("/chat/sessions/{session_id}")
    def session_detail(session_id: str):
        session = ctx.sessions.get(session_id)
        return {
            "session_id": session.session_id,
            "created_at": session.created_at,
            "updated_at": session.updated_at,
            "messages": [
                {
                    "role": m.role,
                    "content": m.content,
                    "citations": {str(k): v for k, v in m.citations.items()},
                }
                for m in session.messages
            ],
            "retrieved": [pid for pid, _ in session.retrieved_docs],
        }

    @app.post("/chat/sessions/{session_id}/messages")
    async def post_message(session_id: str, request: Request):
        body = await request.json()
        text = (body.get("text") or "").strip()
        if not text:
            return JSONResponse(status_code=400, content={"error": "missing text"})
        session = ctx.sessions.get(session_id)
        rounds_before = len(session.retrieved_docs)
        docs_before = [pid for pid, _ in session.retrieved_docs]
        answer = ctx.chat.conversational_answer(text, session)
        docs_after = [pid for pid, _ in session.retrieved_docs]
        return {
            "session_id": session_id,
            "answer": answer.text,
            "citations": {str(k): v for k, v in answer.citations.items()},
            "retrieved": docs_after,
            "new_search": docs_after != docs_before or rounds_before == 0,
        }

    if ctx.config.static_dir is not None and ctx.config.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ctx.config.static_dir, html=True),
                  name="ui")

    return app


def _matches_pub(pub: Publication, filters: FilterSpec) -> bool:
    from .search.engine import _matches

    return _matches(pub, filters)


def _ideal_or_none(ctx: AppContext, fos_id: str) -> int | None:
    from .errors import Unreachable

    try:
        return ctx.store.ideal_steps(fos_id)
    except Unreachable:
        return None
