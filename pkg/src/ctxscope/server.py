"""HTTP service exposing the model bundle, file views, sessions and chat.

Thin stateless wrappers over the pipeline modules: the bundle and corpus are
read-only after startup, sessions live in memory, and each session processes
one message or context edit at a time (per-session lock). All geometry is
served in normalized [0,1] coordinates; pixel mapping is the client's job.
"""

import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .bundle import ModelBundle, bundle_to_dict, layout_to_dict, topic_geometries
from .chat import ChatOrchestrator, ChatSession, ChatTurn, get_file_view, stub_respond
from .corpus import Corpus
from .errors import (
    ConfigError,
    CtxScopeError,
    InputError,
    IntegrityError,
    NotFoundError,
    ParseError,
    ProviderError,
)
from .layout import build_layout
from .retrieval import RetrievalParams, build_index, modify_context
from .topics import SamplingPolicy

API_SCHEMA_VERSION = 1


class MessageIn(BaseModel):
    text: str


class ContextEditIn(BaseModel):
    add_subtopics: list[str] = Field(default_factory=list)
    remove_subtopics: list[str] = Field(default_factory=list)


def _turn_to_dict(turn: ChatTurn) -> dict:
    return {
        "schema_version": API_SCHEMA_VERSION,
        "prompt": turn.prompt,
        "response": turn.response,
        "citations": turn.citations,
        "retrieved_ids": turn.retrieved_ids,
        "summaries": [
            {
                "subtopic_id": s.subtopic_id,
                "summary": s.summary,
                "relevance_explanation": s.relevance_explanation,
                "covered_item_ids": s.covered_item_ids,
            }
            for s in turn.summaries
        ],
    }


def create_app(
    bundle: ModelBundle,
    corpus: Corpus,
    responder=stub_respond,
    retrieval_params: RetrievalParams = RetrievalParams(),
    policy: SamplingPolicy = SamplingPolicy(),
) -> FastAPI:
    from .bundle import resolve_embedding_provider

    provider = resolve_embedding_provider(bundle.config.embed_provider, bundle.config.embed_dim)
    index = build_index(corpus.items, provider)
    orchestrator = ChatOrchestrator(
        corpus, index, bundle.subtopics, responder, retrieval_params, policy
    )
    geometries = topic_geometries(bundle.topics, bundle.subtopics, bundle.projections)
    subtopic_of = {i: s.id for s in bundle.subtopics for i in s.member_ids}
    topic_of = {i: t.id for t in bundle.topics for i in t.member_ids}
    model_view = bundle_to_dict(bundle)
    model_view["schema_version"] = API_SCHEMA_VERSION
    model_view["topics"] = [
        {**t, "size": len(t["member_ids"])} for t in model_view["topics"]
    ]
    model_view["subtopics"] = [
        {**s, "topic_id": int(s["id"].split(".")[0])} for s in model_view["subtopics"]
    ]

    app = FastAPI(title="ctxscope", version="0.1.0")
    sessions: dict[str, ChatSession] = {}
    session_locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()
    counter = {"next": 1}

    def _get_session(session_id: str) -> tuple[ChatSession, threading.Lock]:
        session = sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session '{session_id}'")
        return session, session_locks[session_id]

    def _context_view(session: ChatSession) -> dict:
        block = session.context_block
        entries = []
        if block is not None:
            for entry in block.entries:
                entries.append({
                    "item_id": entry.item_id,
                    "origin": entry.origin,
                    "subtopic_id": subtopic_of.get(entry.item_id),
                    "topic_id": topic_of.get(entry.item_id),
                })
        return {
            "schema_version": API_SCHEMA_VERSION,
            "session_id": session.id,
            "created_from_prompt": block.created_from_prompt if block else None,
            "entries": entries,
        }

    @app.exception_handler(CtxScopeError)
    def _handle_domain_error(request: Request, exc: CtxScopeError):
        if isinstance(exc, NotFoundError):
            status = 404
        elif isinstance(exc, ProviderError):
            status = 502
        elif isinstance(exc, (InputError, ConfigError, ParseError)):
            status = 400
        elif isinstance(exc, IntegrityError):
            status = 500
        else:
            status = 500
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.get("/model")
    def get_model():
        return model_view

    @app.get("/model/layout")
    def get_layout(expanded: Optional[str] = None):
        if expanded is None:
            layout = build_layout(geometries)
        else:
            try:
                topic_id = int(expanded)
            except ValueError:
                raise InputError(f"expanded must be a topic id, got '{expanded}'")
            layout = build_layout(geometries, expanded_topic=topic_id)
        doc = layout_to_dict(layout)
        doc["schema_version"] = API_SCHEMA_VERSION
        return doc

    @app.get("/items/{item_id}")
    def get_item(item_id: str):
        record = get_file_view(item_id, corpus)
        record["schema_version"] = API_SCHEMA_VERSION
        return record

    @app.post("/sessions", status_code=201)
    def create_session():
        with registry_lock:
            session_id = f"s-{counter['next']:04d}"
            counter["next"] += 1
            sessions[session_id] = ChatSession(id=session_id)
            session_locks[session_id] = threading.Lock()
        return {"schema_version": API_SCHEMA_VERSION, "session_id": session_id}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, message: MessageIn):
        session, lock = _get_session(session_id)
        if not message.text or not message.text.strip():
            raise InputError("field 'text' must be a non-empty string")
        with lock:
            turn = orchestrator.respond(session, message.text)
        return _turn_to_dict(turn)

    @app.get("/sessions/{session_id}/context")
    def get_context(session_id: str):
        session, _ = _get_session(session_id)
        return _context_view(session)

    @app.post("/sessions/{session_id}/context")
    def edit_context(session_id: str, edit: ContextEditIn):
        session, lock = _get_session(session_id)
        with lock:
            if session.context_block is None:
                raise InputError("session has no context block yet; send a first message")
            members = {s.id: s.member_ids for s in bundle.subtopics}
            session.context_block = modify_context(
                session.context_block, edit.add_subtopics, edit.remove_subtopics, members
            )
        return _context_view(session)

    return app
