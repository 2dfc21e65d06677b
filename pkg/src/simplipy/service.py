"""Session-oriented HTTP service driving the interactive debugger.

Sessions are in-memory and expire after an idle TTL; each session owns one
History and the static artifacts of its program.  Request handling per
session is serialized by a lock, so readers always see consistent snapshots.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .analysis import Analysis, abstraction_to_json, analyze, cfg_to_json, scopes_to_json
from .diagnostics import SimpliPyError
from .machine import state_to_json
from .simplifier import simplify
from .syntax import parse_program
from .trace import History

DEFAULT_SESSION_TTL = 3600.0

_PLACEHOLDER = """<!doctype html>
<html><head><title>SimpliPy</title></head>
<body><h1>SimpliPy debugger service</h1>
<p>The API is live under <code>/api</code>. Point <code>--static-dir</code> at the built
frontend to serve the debugger UI here.</p></body></html>"""


class CreateSessionRequest(BaseModel):
    source: str


class SimplifyRequest(BaseModel):
    source: str


class EntryResponse(BaseModel):
    state: dict
    label: str
    preLoc: int
    cursor: int
    total: int


class CreateSessionResponse(BaseModel):
    sessionId: str
    diagnostics: list[dict] = []
    state: dict
    cfg: dict
    scopes: list[dict]
    abstraction: dict[str, str]


class SimplifyResponse(BaseModel):
    output: str | None
    applied: list[str]
    diagnostics: list[dict]
    lineMap: dict[str, int]


@dataclass
class Session:
    id: str
    history: History
    static: Analysis
    created_at: float
    last_access: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl: float = DEFAULT_SESSION_TTL):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, history: History, static: Analysis) -> Session:
        now = time.monotonic()
        session = Session(secrets.token_urlsafe(16), history, static, now, now)
        with self._lock:
            self._purge(now)
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        now = time.monotonic()
        with self._lock:
            self._purge(now)
            session = self._sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail="unknown session")
            session.last_access = now
            return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            del self._sessions[session_id]

    def _purge(self, now: float) -> None:
        expired = [sid for sid, s in self._sessions.items() if now - s.last_access > self.ttl]
        for sid in expired:
            del self._sessions[sid]


def _entry_payload(session: Session) -> dict:
    entry = session.history.current
    return {
        "state": state_to_json(entry.post_state),
        "label": entry.label,
        "preLoc": entry.pre_loc,
        "cursor": session.history.cursor,
        "total": len(session.history.entries),
    }


def create_app(static_dir: str | None = None, session_ttl: float = DEFAULT_SESSION_TTL) -> FastAPI:
    app = FastAPI(title="simplipy", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl=session_ttl)
    app.state.sessions = store

    @app.exception_handler(RequestValidationError)
    def malformed_body(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": "malformed request body", "errors": exc.errors()})

    @app.post("/api/sessions", response_model=CreateSessionResponse)
    def create_session(body: CreateSessionRequest):
        try:
            program = parse_program(body.source)
            static = analyze(program)
        except SimpliPyError as e:
            return JSONResponse(status_code=422, content={"diagnostics": [d.to_json() for d in e.diagnostics]})
        session = store.create(History(program, static), static)
        return CreateSessionResponse(
            sessionId=session.id,
            diagnostics=[],
            state=state_to_json(session.history.current_state),
            cfg=cfg_to_json(static.cfg),
            scopes=scopes_to_json(static.scopes),
            abstraction=abstraction_to_json(static.abstraction),
        )

    @app.get("/api/sessions/{session_id}", response_model=EntryResponse)
    def get_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return _entry_payload(session)

    @app.post("/api/sessions/{session_id}/step", response_model=EntryResponse)
    def step_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            session.history.advance()
            return _entry_payload(session)

    @app.post("/api/sessions/{session_id}/back", response_model=EntryResponse)
    def back_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            session.history.step_back()
            return _entry_payload(session)

    @app.post("/api/sessions/{session_id}/reset", response_model=EntryResponse)
    def reset_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            session.history.reset()
            return _entry_payload(session)

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        store.delete(session_id)

    @app.post("/api/simplify", response_model=SimplifyResponse)
    def simplify_source(body: SimplifyRequest):
        result = simplify(body.source)
        return SimplifyResponse(**result.to_json())

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _PLACEHOLDER

    return app


app = create_app()
