"""Binding parsed scripts to live sessions.

Statements execute in order against one session; the first runtime failure
halts the run with the offending statement's span attached. Finished
chains (on `clear` and at end of run) are recorded into the usage log that
feeds adaptation.
"""

from __future__ import annotations

import os
from typing import Optional

from ..adaptive import UsageLog, apply_proposal, detect_patterns
from ..engine import PivotSession, SCOPE_DEFAULT, begin_session
from ..errors import (AdaptationError, DslRuntimeError, PivotLadderError,
                      SessionStateError)
from ..filters import CATEGORICAL
from ..formats import export_subgraph, load_graph, normalize_format
from ..graph import PropertyGraph
from . import parsing as ast


def _predicate_payload(pred: ast.Pred) -> dict:
    if isinstance(pred, ast.DegreePred):
        return {"kind": "degree", "direction": pred.direction,
                "op": pred.op, "threshold": pred.threshold}
    return {"kind": "attribute", "key": pred.key, "op": pred.op,
            "literal": pred.literal}


def guess_format(path: str) -> str:
    low = path.lower()
    if low.endswith((".graphml", ".xml")):
        return "graphml-subset"
    return "json-nodelink"


class Interpreter:
    """Holds the graph, session, and adaptation state across statements."""

    def __init__(self, graph: Optional[PropertyGraph] = None,
                 usage_log: Optional[UsageLog] = None,
                 theta: int = 3,
                 base_dir: str = ".",
                 session_id: str = "script"):
        self.graph = graph
        self.usage_log = usage_log if usage_log is not None else UsageLog()
        self.theta = theta
        self.base_dir = base_dir
        self.session_id = session_id
        self.session: Optional[PivotSession] = None
        self.last_report = None
        self.outputs: list[dict] = []
        if graph is not None:
            self.session = begin_session(graph, self._sink)

    def _sink(self, session: PivotSession):
        self.usage_log.record_chain(session, self.session_id)

    def _path(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def _require_session(self) -> PivotSession:
        if self.session is None:
            raise SessionStateError("no graph loaded")
        return self.session

    def run_text(self, text: str) -> list[dict]:
        """Parse and execute; returns outputs emitted by this call."""
        script = ast.parse(text)
        return self.run_script(script)

    def run_script(self, script: ast.Script) -> list[dict]:
        before = len(self.outputs)
        for stmt in script.statements:
            self.run_statement(stmt)
        return self.outputs[before:]

    def finish(self):
        """Record the final chain; call once when the run is over."""
        if self.session is not None and self.session.steps:
            self.usage_log.record_chain(self.session, self.session_id)

    def run_statement(self, stmt: ast.Statement):
        try:
            self._dispatch(stmt)
        except PivotLadderError as exc:
            if isinstance(exc, DslRuntimeError):
                raise
            raise DslRuntimeError(exc.message, stmt.span.line, stmt.span.col,
                                  cause=exc) from exc

    def _dispatch(self, stmt: ast.Statement):
        if isinstance(stmt, ast.Load):
            session = self.session
            if session is not None and (session.steps or session.operation_log):
                raise SessionStateError("load must come before any session operation")
            fmt = stmt.format or guess_format(stmt.path)
            with open(self._path(stmt.path), encoding="utf-8") as fh:
                text = fh.read()
            self.graph = load_graph(text, fmt)
            self.session = begin_session(self.graph, self._sink)
            self.outputs.append({
                "kind": "load", "path": stmt.path,
                "format": normalize_format(fmt),
                "nodes": len(self.graph.nodes), "edges": len(self.graph.edges),
                "version": self.graph.version,
            })
            return
        if isinstance(stmt, ast.Select):
            session = self._require_session()
            session.select(stmt.cls, [_predicate_payload(p) for p in stmt.predicates])
            return
        if isinstance(stmt, ast.Pivot):
            session = self._require_session()
            session.pivot(stmt.target, edge_class=stmt.via,
                          mode=stmt.mode or SCOPE_DEFAULT)
            return
        if isinstance(stmt, ast.Filter):
            session = self._require_session()
            for pred in stmt.predicates:
                session.apply_filter(_predicate_payload(pred))
            return
        if isinstance(stmt, ast.Group):
            session = self._require_session()
            if stmt.order is None:
                sort = ("label", "asc")
            else:
                sort = ("count", stmt.order)
            binning = ("equal-width", stmt.bins) if stmt.bins is not None else CATEGORICAL
            session.group_by(stmt.key, sort, binning)
            return
        if isinstance(stmt, ast.Bins):
            self._require_session().select_bins(list(stmt.labels))
            return
        if isinstance(stmt, ast.Snip):
            self._require_session().snip_filter(stmt.filter_id)
            return
        if isinstance(stmt, ast.Scope):
            self._require_session().set_global_scope(stmt.on)
            return
        if isinstance(stmt, ast.Undo):
            self._require_session().undo()
            return
        if isinstance(stmt, ast.Clear):
            session = self._require_session()
            session.clear()
            if self.graph is not None and session.graph.version != self.graph.version:
                # pick up the latest snapshot once the old chain is gone
                self.session = begin_session(self.graph, self._sink)
            return
        if isinstance(stmt, ast.Describe):
            session = self._require_session()
            self.outputs.append({"kind": "describe",
                                 "chain": session.describe_chain()})
            return
        if isinstance(stmt, ast.Export):
            session = self._require_session()
            fmt = normalize_format(stmt.format or guess_format(stmt.path))
            extraction = session.current_subgraph()
            document = export_subgraph(session.graph, extraction, fmt)
            with open(self._path(stmt.path), "w", encoding="utf-8") as fh:
                fh.write(document)
            self.outputs.append({
                "kind": "export", "path": stmt.path, "format": fmt,
                "nodes": len(extraction.node_ids),
                "edges": len(extraction.edge_ids),
            })
            return
        if isinstance(stmt, ast.AdaptReport):
            proposals = detect_patterns(self.usage_log, self.theta)
            self.last_report = proposals
            self.outputs.append({
                "kind": "adapt-report",
                "proposals": [p.to_json() for p in proposals],
            })
            return
        if isinstance(stmt, ast.AdaptApply):
            if self.last_report is None:
                raise AdaptationError("no report yet; run `adapt report` first")
            if not 1 <= stmt.index <= len(self.last_report):
                raise AdaptationError(
                    f"proposal number out of range 1..{len(self.last_report)}"
                )
            if self.graph is None:
                raise SessionStateError("no graph loaded")
            proposal = self.last_report[stmt.index - 1]
            self.graph = apply_proposal(self.graph, proposal)
            session = self.session
            if session is not None and not session.steps and not session.operation_log:
                self.session = begin_session(self.graph, self._sink)
            self.outputs.append({
                "kind": "adapt-apply", "proposal": proposal.id,
                "graphVersion": self.graph.version,
            })
            return
        raise AssertionError(f"unhandled statement {stmt!r}")


def run_script(text: str, graph: Optional[PropertyGraph] = None,
               usage_log: Optional[UsageLog] = None, theta: int = 3,
               base_dir: str = ".", session_id: str = "script") -> Interpreter:
    """Parse and execute a whole script, then record the final chain."""
    interp = Interpreter(graph, usage_log, theta, base_dir, session_id)
    interp.run_text(text)
    interp.finish()
    return interp
