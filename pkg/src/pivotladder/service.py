"""HTTP facade over sessions, schema introspection, and adaptation.

Every mutating session endpoint answers with the full session state so a
client never has to patch local copies. Sessions stay pinned to the graph
snapshot they were created on; adaptation publishes a new snapshot that
only later sessions see.
"""

from __future__ import annotations

import itertools
import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import HTTPException, RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import AliasChoices, BaseModel, Field

from .adaptive import UsageLog, apply_proposal, detect_patterns
from .ambiguity import classify, decide, explain
from .engine import PivotSession, SCOPE_DEFAULT, begin_session
from .errors import ClassCollisionError, PivotLadderError, UnknownFilterError
from .filters import CATEGORICAL
from .formats import export_subgraph, normalize_format
from .graph import PropertyGraph, schema_summary
from .values import value_label

log = logging.getLogger(__name__)

DEFAULT_IDLE_TIMEOUT = 30 * 60.0


# ---- request bodies ----

class SelectBody(BaseModel):
    cls: str = Field(alias="class")
    predicates: list[dict] = []

    model_config = {"populate_by_name": True}


class PivotBody(BaseModel):
    cls: str = Field(alias="class")
    via: Optional[str] = Field(
        default=None, validation_alias=AliasChoices("via", "edgeClass"))
    mode: str = SCOPE_DEFAULT
    direction: str = "any"

    model_config = {"populate_by_name": True}


class GroupBody(BaseModel):
    key: str
    sort: Optional[list] = None
    bins: Optional[int] = None


class BinsBody(BaseModel):
    labels: list[str]


class ScopeBody(BaseModel):
    on: Optional[bool] = None


# ---- shared state ----

@dataclass
class SessionEntry:
    id: str
    session: PivotSession
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_seen: float = field(default_factory=time.monotonic)


class ServiceState:
    def __init__(self, graph: PropertyGraph, theta: int = 3,
                 auto_apply: bool = False,
                 idle_timeout: Optional[float] = DEFAULT_IDLE_TIMEOUT,
                 usage_log: Optional[UsageLog] = None):
        self.graph = graph
        self.theta = theta
        self.auto_apply = auto_apply
        self.idle_timeout = idle_timeout
        self.usage_log = usage_log if usage_log is not None else UsageLog()
        self.sessions: dict[str, SessionEntry] = {}
        self.applied: list[str] = []
        self.lock = threading.RLock()
        self._ids = itertools.count(1)

    def new_session(self) -> SessionEntry:
        with self.lock:
            self.evict_idle()
            sid = f"s{next(self._ids)}"
            session = begin_session(self.graph,
                                    lambda s, sid=sid: self.record_chain(s, sid))
            entry = SessionEntry(sid, session)
            self.sessions[sid] = entry
            return entry

    def entry(self, sid: str) -> SessionEntry:
        with self.lock:
            entry = self.sessions.get(sid)
            if entry is None:
                raise HTTPException(status_code=404, detail={
                    "error": "unknown_session",
                    "message": f"unknown session {sid!r}",
                })
            entry.last_seen = time.monotonic()
            return entry

    def evict_idle(self):
        if self.idle_timeout is None:
            return
        cutoff = time.monotonic() - self.idle_timeout
        with self.lock:
            stale = [e for e in self.sessions.values() if e.last_seen < cutoff]
            for entry in stale:
                del self.sessions[entry.id]
            for entry in stale:
                if entry.session.steps:
                    self.record_chain(entry.session, entry.id)

    def record_chain(self, session: PivotSession, sid: str):
        self.usage_log.record_chain(session, sid)
        if self.auto_apply:
            self.apply_pending()

    def apply_pending(self):
        with self.lock:
            for proposal in detect_patterns(self.usage_log, self.theta):
                if proposal.id in self.applied:
                    continue
                try:
                    self.graph = apply_proposal(self.graph, proposal)
                except ClassCollisionError:
                    pass   # structure already present; just mark it
                self.applied.append(proposal.id)
                log.info("applied proposal %s -> graph v%d",
                         proposal.id, self.graph.version)

    def proposals(self):
        with self.lock:
            return detect_patterns(self.usage_log, self.theta)


# ---- JSON shapes ----

def schema_json(g: PropertyGraph) -> dict:
    summary = schema_summary(g)
    connections = {
        nc.name: [
            {"edgeClass": c.edge_class, "otherClass": c.other_class,
             "count": c.count, "reverse": c.reverse}
            for c in summary.connections(nc.name)
        ]
        for nc in summary.node_classes
    }
    return {
        "graphVersion": g.version,
        "nodeClasses": [
            {"name": nc.name, "count": nc.count,
             "attributes": [{"key": k, "kind": kind} for k, kind in nc.attributes]}
            for nc in summary.node_classes
        ],
        "edgeClasses": [
            {"name": ec.name, "count": ec.count,
             "directedness": ec.directedness, "derived": ec.derived}
            for ec in summary.edge_classes
        ],
        "connections": connections,
    }


def session_json(entry: SessionEntry) -> dict:
    body = entry.session.to_json()
    body["id"] = entry.id
    return body


# ---- app ----

def create_app(graph: PropertyGraph, *, theta: int = 3,
               auto_apply: bool = False,
               idle_timeout: Optional[float] = DEFAULT_IDLE_TIMEOUT,
               usage_log: Optional[UsageLog] = None,
               static_dir: Optional[str] = None) -> FastAPI:
    state = ServiceState(graph, theta=theta, auto_apply=auto_apply,
                         idle_timeout=idle_timeout, usage_log=usage_log)
    app = FastAPI(title="pivotladder", docs_url=None, redoc_url=None)
    app.state.pivot = state

    @app.exception_handler(PivotLadderError)
    def _domain_error(request: Request, exc: PivotLadderError):
        status = 404 if isinstance(exc, UnknownFilterError) else 422
        return JSONResponse(status_code=status,
                            content={"error": exc.code, "message": exc.message})

    @app.exception_handler(HTTPException)
    def _http_error(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"error": "http_error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "error": "invalid_request", "message": str(exc.errors()[:3]),
        })

    # -- graph-level --

    @app.get("/api/schema")
    def get_schema(session: Optional[str] = None):
        if session is not None:
            return schema_json(state.entry(session).session.graph)
        with state.lock:
            return schema_json(state.graph)

    @app.get("/api/values")
    def search_values(q: str = Query(min_length=1), cls: Optional[str] = None,
                      key: Optional[str] = None, limit: int = 25,
                      session: Optional[str] = None):
        g = state.entry(session).session.graph if session else state.graph
        needle = q.lower()
        hits = []
        for node in g.nodes.values():
            if cls is not None and node.cls != cls:
                continue
            for k, v in sorted(node.attrs.items()):
                if key is not None and k != key:
                    continue
                label = value_label(v)
                if needle in label.lower():
                    hits.append({"nodeId": node.id, "class": node.cls,
                                 "key": k, "value": v, "label": label})
                    if len(hits) >= limit:
                        return {"matches": hits, "truncated": True}
        return {"matches": hits, "truncated": False}

    # -- session lifecycle --

    @app.post("/api/session")
    def create_session():
        return session_json(state.new_session())

    @app.get("/api/session/{sid}")
    def get_session(sid: str):
        entry = state.entry(sid)
        with entry.lock:
            return session_json(entry)

    # -- session mutations --

    def _mutate(sid: str, op) -> dict:
        entry = state.entry(sid)
        with entry.lock:
            op(entry.session)
            return session_json(entry)

    @app.post("/api/session/{sid}/select")
    def post_select(sid: str, body: SelectBody):
        return _mutate(sid, lambda s: s.select(body.cls, body.predicates))

    @app.post("/api/session/{sid}/pivot")
    def post_pivot(sid: str, body: PivotBody):
        return _mutate(sid, lambda s: s.pivot(body.cls, edge_class=body.via,
                                              mode=body.mode,
                                              direction=body.direction))

    @app.post("/api/session/{sid}/filter")
    def post_filter(sid: str, body: dict):
        return _mutate(sid, lambda s: s.apply_filter(body))

    @app.post("/api/session/{sid}/group")
    def post_group(sid: str, body: GroupBody):
        sort = tuple(body.sort) if body.sort else ("label", "asc")
        binning = ("equal-width", body.bins) if body.bins else CATEGORICAL
        return _mutate(sid, lambda s: s.group_by(body.key, sort, binning))

    @app.post("/api/session/{sid}/bins")
    def post_bins(sid: str, body: BinsBody):
        return _mutate(sid, lambda s: s.select_bins(body.labels))

    @app.post("/api/session/{sid}/snip/{filter_id}")
    def post_snip(sid: str, filter_id: int):
        return _mutate(sid, lambda s: s.snip_filter(filter_id))

    @app.post("/api/session/{sid}/scope")
    def post_scope(sid: str, body: Optional[ScopeBody] = None):
        if body is None or body.on is None:
            return _mutate(sid, lambda s: s.toggle_global_scope())
        return _mutate(sid, lambda s: s.set_global_scope(body.on))

    @app.post("/api/session/{sid}/undo")
    def post_undo(sid: str):
        return _mutate(sid, lambda s: s.undo())

    @app.post("/api/session/{sid}/clear")
    def post_clear(sid: str):
        entry = state.entry(sid)
        with entry.lock:
            entry.session.clear()
            with state.lock:
                if entry.session.graph.version != state.graph.version:
                    entry.session = begin_session(
                        state.graph,
                        lambda s, sid=sid: state.record_chain(s, sid))
            return session_json(entry)

    # -- session views --

    @app.get("/api/session/{sid}/classify")
    def get_classify(sid: str, cls: str = Query(alias="class")):
        entry = state.entry(sid)
        with entry.lock:
            report = classify(entry.session, cls)
            decision = decide(report)
            return {"class": cls, **explain(entry.session, report, decision)}

    @app.get("/api/session/{sid}/describe")
    def get_describe(sid: str):
        entry = state.entry(sid)
        with entry.lock:
            return {"id": entry.id, "chain": entry.session.describe_chain()}

    @app.get("/api/session/{sid}/export")
    def get_export(sid: str, format: str = "json-nodelink"):
        fmt = normalize_format(format)
        entry = state.entry(sid)
        with entry.lock:
            extraction = entry.session.current_subgraph()
            document = export_subgraph(entry.session.graph, extraction, fmt)
        if fmt == "graphml-subset":
            media, ext = "application/xml", "graphml"
        else:
            media, ext = "application/json", "json"
        headers = {"Content-Disposition":
                   f'attachment; filename="{sid}.{ext}"'}
        return Response(content=document, media_type=media, headers=headers)

    # -- adaptation --

    @app.get("/api/adapt/proposals")
    def get_proposals():
        with state.lock:
            proposals = state.proposals()
            return {
                "theta": state.theta,
                "graphVersion": state.graph.version,
                "proposals": [
                    {**p.to_json(), "applied": p.id in state.applied}
                    for p in proposals
                ],
            }

    @app.post("/api/adapt/apply/{proposal_id}")
    def post_apply(proposal_id: str):
        with state.lock:
            match = next((p for p in state.proposals()
                          if p.id == proposal_id), None)
            if match is None:
                raise HTTPException(status_code=404, detail={
                    "error": "unknown_proposal",
                    "message": f"unknown proposal {proposal_id!r}",
                })
            state.graph = apply_proposal(state.graph, match)
            state.applied.append(match.id)
            return {"proposal": match.to_json(),
                    "graphVersion": state.graph.version,
                    "schema": schema_json(state.graph)}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="ui")

    return app
