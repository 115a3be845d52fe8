"""The pivot session: chained categorical pivots with replayable history.

Every user operation is appended to an operation log; ids for filters are
assigned once, at issue time, and stored inside the logged operation.
Appending operations extends the chain incrementally, while anything that
reaches back in time (snipping a filter, toggling global scope, undo)
recomputes the whole chain by replaying the log. Snips and scope toggles
stay in the log as parity flips, so the session state is always a pure
function of the log and replaying it on a fresh session reproduces the
steps exactly.

Global scope is retroactive: a filter's effective activity is its own flag
AND the session scope, re-evaluated over the entire chain on every rebuild.
Mode resolution happens inside the replay, so a scope-default pivot issued
before a scope toggle resolves against the scope in force after it.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import ambiguity
from .errors import (
    EmptyLogError,
    FilterKindError,
    SessionStateError,
    UnknownFilterError,
)
from .filters import (
    ATTRIBUTE,
    BINS,
    CATEGORICAL,
    DEGREE,
    FilterSpec,
    HistogramView,
    build_histogram,
    evaluate_filter,
    filter_label,
    make_attribute_filter,
    make_bins_filter,
    make_degree_filter,
    require_labels,
)
from .graph import ANY, DIRECTIONS, Extraction, PropertyGraph

FANOUT = "fanout"
FANIN = "fanin"
INTERSECT = "intersect"
SCOPE_DEFAULT = "scope"
SMART = "smart"

MODES = (FANOUT, FANIN, INTERSECT, SCOPE_DEFAULT, SMART)
SELECT_MODE = "select"


@dataclass
class PivotStep:
    index: int
    category: str
    base_set: frozenset[str]
    active_set: frozenset[str]
    direct_filters: list[FilterSpec]
    mode_used: str
    mode_requested: str
    edge_class: Optional[str] = None
    direction: str = ANY
    warning: Optional[str] = None
    smart: Optional[dict] = None
    _witness_thunk: Optional[Callable[[], frozenset]] = field(default=None, repr=False)
    _witnesses: Optional[frozenset] = field(default=None, repr=False)

    @property
    def witnessed_edges(self) -> frozenset[str]:
        # computed lazily: the common case never inspects edges, and the
        # pivot itself must stay cheap on large graphs
        if self._witnesses is None:
            if self._witness_thunk is None:
                self._witnesses = frozenset()
            else:
                self._witnesses = frozenset(self._witness_thunk())
        return self._witnesses


def _spec_from_payload(payload: dict, step: int, active: bool) -> FilterSpec:
    kind = payload["kind"]
    fid = payload["id"]
    if kind == ATTRIBUTE:
        literal = payload["literal"]
        if isinstance(literal, list):
            literal = tuple(literal)
        spec = make_attribute_filter(fid, step, payload["key"], payload["op"], literal)
    elif kind == DEGREE:
        spec = make_degree_filter(fid, step, payload["direction"], payload["op"],
                                  payload["threshold"])
    elif kind == BINS:
        spec = make_bins_filter(fid, step, payload["key"], tuple(payload["binning"]),
                                payload["labels"])
    else:
        raise FilterKindError(f"unknown filter kind {kind!r}")
    return spec.with_active(active)


def _payload_from_args(kind: str, fid: int, **kw) -> dict:
    if kind == ATTRIBUTE:
        literal = kw["literal"]
        if isinstance(literal, tuple):
            literal = list(literal)
        return {"id": fid, "kind": ATTRIBUTE, "key": kw["key"], "op": kw["op"],
                "literal": literal}
    if kind == DEGREE:
        return {"id": fid, "kind": DEGREE, "direction": kw["direction"],
                "op": kw["op"], "threshold": kw["threshold"]}
    if kind == BINS:
        return {"id": fid, "kind": BINS, "key": kw["key"],
                "binning": list(kw["binning"]), "labels": list(kw["labels"])}
    raise FilterKindError(f"unknown filter kind {kind!r}")


class PivotSession:
    """Single-writer pivot chain over one immutable graph snapshot."""

    def __init__(self, graph: PropertyGraph,
                 usage_sink: Optional[Callable[["PivotSession"], None]] = None):
        self.graph = graph
        self.usage_sink = usage_sink
        self.steps: list[PivotStep] = []
        self.global_scope: bool = True
        self.operation_log: list[dict] = []
        self._flags: dict[int, bool] = {}
        self._next_filter_id = 1
        self._issued: set[int] = set()
        self._view_params: Optional[tuple] = None   # (key, sort, binning, step index)

    # -- helpers --------------------------------------------------------------

    def _require_steps(self):
        if not self.steps:
            raise SessionStateError("the chain is empty; select a class first")

    def _last(self) -> PivotStep:
        return self.steps[-1]

    def _issue_filter_id(self) -> int:
        fid = self._next_filter_id
        self._next_filter_id += 1
        return fid

    def _flag(self, fid: int) -> bool:
        return self._flags.get(fid, True)

    def _checked_payload(self, raw: dict, step: int) -> tuple[str, dict]:
        """Validate a caller-supplied filter payload without issuing an id."""
        try:
            kind = raw["kind"]
            kwargs = {k: v for k, v in raw.items() if k not in ("kind", "id")}
            probe = _payload_from_args(kind, 0, **kwargs)
        except KeyError as exc:
            raise FilterKindError(f"filter payload missing field {exc.args[0]!r}") from None
        _spec_from_payload(probe, step, True)   # raises FilterKindError when invalid
        return kind, kwargs

    def _effective(self, spec: FilterSpec) -> bool:
        return spec.active and self.global_scope

    def _fold_filters(self, step: PivotStep) -> frozenset[str]:
        current = set(step.base_set)
        for spec in step.direct_filters:
            if self._effective(spec):
                # only degree predicates look at edges; keep witnesses lazy
                witnesses = step.witnessed_edges if spec.kind == DEGREE else frozenset()
                current = evaluate_filter(self.graph, spec, current, witnesses)
        return frozenset(current)

    def _prior_visit(self, category: str) -> Optional[PivotStep]:
        for step in reversed(self.steps):
            if step.category == category:
                return step
        return None

    # -- structural executors (shared by public ops and replay) ---------------

    def _exec_select(self, op: dict):
        base = frozenset(self.graph.nodes_of_class(op["class"]))
        step = PivotStep(
            index=len(self.steps), category=op["class"],
            base_set=base, active_set=base, direct_filters=[],
            mode_used=SELECT_MODE, mode_requested=SELECT_MODE,
        )
        self.steps.append(step)
        for payload in op["predicates"]:
            spec = _spec_from_payload(payload, step.index, self._flag(payload["id"]))
            step.direct_filters.append(spec)
        step.active_set = self._fold_filters(step)

    def _exec_pivot(self, op: dict):
        prev = self._last()
        seeds = prev.active_set
        target = op["class"]
        edge_class = op["edgeClass"]
        direction = op["direction"]
        requested = op["mode"]

        smart: Optional[dict] = None
        if requested == SMART:
            report = ambiguity.classify(self, target)
            decision = ambiguity.decide(report)
            resolved = decision.suggested_mode
            smart = {"classification": report.classification,
                     **decision.to_json()}
        elif requested == SCOPE_DEFAULT:
            resolved = FANIN if self.global_scope else FANOUT
        else:
            resolved = requested

        base = frozenset(self.graph.neighbors(seeds, target, edge_class, direction))
        graph = self.graph

        def witness_thunk(seeds=seeds, target=target, edge_class=edge_class,
                          direction=direction, graph=graph):
            return graph.neighbors_with_witnesses(seeds, target, edge_class,
                                                  direction)[1]

        step = PivotStep(
            index=len(self.steps), category=target,
            base_set=base, active_set=base, direct_filters=[],
            mode_used=resolved, mode_requested=requested,
            edge_class=edge_class, direction=direction, smart=smart,
            _witness_thunk=witness_thunk,
        )

        if resolved == FANIN:
            prior = self._prior_visit(target)
            if prior is not None:
                current = set(base)
                for spec in prior.direct_filters:
                    if not self._effective(spec):
                        continue
                    # degree predicates re-applied here count edges of the
                    # new step's seed-and-neighbor subgraph, not the old one
                    witnesses = step.witnessed_edges if spec.kind == DEGREE else frozenset()
                    current = evaluate_filter(self.graph, spec, current, witnesses)
                step.active_set = frozenset(current)
        elif resolved == INTERSECT:
            prior = self._prior_visit(target)
            if prior is None:
                raise SessionStateError(
                    f"intersect mode needs a prior visit of {target!r}"
                )
            step.active_set = base & prior.active_set

        if not base:
            step.warning = "empty-result"
        self.steps.append(step)

    def _exec_filter(self, op: dict):
        step = self._last()
        payload = op["spec"]
        spec = _spec_from_payload(payload, step.index, self._flag(payload["id"]))
        step.direct_filters.append(spec)
        step.active_set = self._fold_filters(step)

    def _exec_group(self, op: dict):
        self._view_params = (op["key"], tuple(op["sort"]), tuple(op["binning"]),
                             self._last().index)

    def _exec_bins(self, op: dict):
        step = self._last()
        spec = _spec_from_payload(
            {"id": op["id"], "kind": BINS, "key": op["key"],
             "binning": op["binning"], "labels": op["labels"]},
            step.index, self._flag(op["id"]),
        )
        step.direct_filters.append(spec)
        step.active_set = self._fold_filters(step)

    _EXECUTORS = {
        "select": _exec_select, "pivot": _exec_pivot, "filter": _exec_filter,
        "group": _exec_group, "bins": _exec_bins,
    }

    def _rebuild(self):
        scope = True
        flags: dict[int, bool] = {}
        issued: set[int] = set()
        for op in self.operation_log:
            name = op["op"]
            if name == "scope":
                scope = not scope
            elif name == "snip":
                fid = op["filterId"]
                flags[fid] = not flags.get(fid, True)
            elif name == "select":
                issued.update(p["id"] for p in op["predicates"])
            elif name == "filter":
                issued.add(op["spec"]["id"])
            elif name == "bins":
                issued.add(op["id"])
        self.global_scope = scope
        self._flags = flags
        self._issued = issued
        # ids are a pure function of the log, so an undo rolls the counter
        # back and a replay on a fresh session assigns the same ids
        self._next_filter_id = max(issued, default=0) + 1
        self.steps = []
        self._view_params = None
        for op in self.operation_log:
            executor = self._EXECUTORS.get(op["op"])
            if executor is not None:
                executor(self, op)

    # -- public operations ------------------------------------------------------

    def select(self, cls: str,
               predicates: Optional[Sequence[dict]] = None) -> PivotStep:
        """Start the chain at all nodes of a class, optionally pre-filtered.

        Each predicate is a payload dict: {"kind": "attribute", "key", "op",
        "literal"} or {"kind": "degree", "direction", "op", "threshold"}.
        """
        if self.steps:
            raise SessionStateError("chain already started; clear it first")
        self.graph.require_node_class(cls)
        validated = [self._checked_payload(raw, 0) for raw in predicates or ()]
        stamped = []
        for kind, kwargs in validated:
            stamped.append(_payload_from_args(kind, self._issue_filter_id(), **kwargs))
        op = {"op": "select", "class": cls, "predicates": stamped}
        self.operation_log.append(op)
        self._issued.update(p["id"] for p in stamped)
        self._exec_select(op)
        return self._last()

    def pivot(self, target_class: str, edge_class: Optional[str] = None,
              mode: str = SCOPE_DEFAULT, direction: str = ANY) -> PivotStep:
        self._require_steps()
        self.graph.require_node_class(target_class)
        if edge_class is not None:
            self.graph.require_edge_class(edge_class)
        if mode not in MODES:
            raise SessionStateError(f"unknown pivot mode {mode!r}")
        if direction not in DIRECTIONS:
            raise SessionStateError(f"unknown direction {direction!r}")
        if mode == INTERSECT and self._prior_visit(target_class) is None:
            raise SessionStateError(
                f"intersect mode needs a prior visit of {target_class!r}"
            )
        op = {"op": "pivot", "class": target_class, "edgeClass": edge_class,
              "direction": direction, "mode": mode}
        self.operation_log.append(op)
        self._exec_pivot(op)
        return self._last()

    def apply_filter(self, payload: dict) -> PivotStep:
        """Append one direct filter (payload as in select) to the current step."""
        self._require_steps()
        kind, kwargs = self._checked_payload(payload, self._last().index)
        stamped = _payload_from_args(kind, self._issue_filter_id(), **kwargs)
        op = {"op": "filter", "spec": stamped}
        self.operation_log.append(op)
        self._issued.add(stamped["id"])
        self._exec_filter(op)
        return self._last()

    def filter_attribute(self, key: str, op: str, literal) -> PivotStep:
        return self.apply_filter({"kind": ATTRIBUTE, "key": key, "op": op,
                                  "literal": literal})

    def filter_degree(self, direction: str, op: str, threshold: int) -> PivotStep:
        return self.apply_filter({"kind": DEGREE, "direction": direction,
                                  "op": op, "threshold": threshold})

    def group_by(self, key: str, sort: tuple[str, str] = ("label", "asc"),
                 binning: tuple = CATEGORICAL) -> HistogramView:
        self._require_steps()
        view = build_histogram(self.graph, set(self._last().active_set), key,
                               sort, tuple(binning), self._last().index)
        op = {"op": "group", "key": key, "sort": list(sort),
              "binning": list(binning)}
        self.operation_log.append(op)
        self._exec_group(op)
        return view

    def histogram(self) -> Optional[HistogramView]:
        """The current grouping, recomputed against the live active set."""
        if self._view_params is None:
            return None
        key, sort, binning, step_index = self._view_params
        if step_index >= len(self.steps):
            return None
        return build_histogram(self.graph, set(self.steps[step_index].active_set),
                               key, sort, binning, step_index)

    def select_bins(self, labels: Sequence[str],
                    view: Optional[HistogramView] = None) -> PivotStep:
        self._require_steps()
        view = view or self.histogram()
        if view is None:
            raise SessionStateError("no histogram in view; group by a key first")
        labels = require_labels(view, labels)
        fid = self._issue_filter_id()
        op = {"op": "bins", "id": fid, "key": view.attribute_key,
              "binning": list(view.binning), "labels": list(labels)}
        self.operation_log.append(op)
        self._issued.add(fid)
        self._exec_bins(op)
        return self._last()

    def snip_filter(self, filter_id: int) -> None:
        """Toggle one filter's own active flag; snipping twice restores it."""
        if filter_id not in self._issued:
            raise UnknownFilterError(f"no filter with id {filter_id}")
        self.operation_log.append({"op": "snip", "filterId": filter_id})
        self._rebuild()

    def toggle_global_scope(self) -> None:
        self.operation_log.append({"op": "scope"})
        self._rebuild()

    def set_global_scope(self, desired: bool) -> None:
        """Toggle only when the state differs; a no-op is not logged."""
        if self.global_scope != desired:
            self.toggle_global_scope()

    def undo(self) -> None:
        if not self.operation_log:
            raise EmptyLogError("nothing to undo")
        self.operation_log.pop()
        self._rebuild()

    def clear(self) -> None:
        """Reset to an empty chain; the discarded chain goes to the usage sink."""
        if self.steps and self.usage_sink is not None:
            self.usage_sink(self)
        self.steps = []
        self.global_scope = True
        self.operation_log = []
        self._flags = {}
        self._next_filter_id = 1
        self._issued = set()
        self._view_params = None

    # -- read-only views ---------------------------------------------------------

    def all_filters(self) -> list[FilterSpec]:
        return [f for step in self.steps for f in step.direct_filters]

    def current_subgraph(self) -> Extraction:
        self._require_steps()
        node_ids: set[str] = set()
        for step in self.steps:
            node_ids.update(step.active_set)
        edge_ids: set[str] = set()
        for step in self.steps:
            for eid in step.witnessed_edges:
                e = self.graph.edges[eid]
                if e.source in node_ids and e.target in node_ids:
                    edge_ids.add(eid)
        provenance = tuple(
            (step.index, step.category, len(step.active_set)) for step in self.steps
        )
        return Extraction(frozenset(node_ids), frozenset(edge_ids), provenance)

    def describe_chain(self) -> list[dict]:
        return [
            {
                "index": step.index,
                "category": step.category,
                "mode": step.mode_used,
                "filters": [filter_label(f) for f in step.direct_filters],
                "size": len(step.active_set),
            }
            for step in self.steps
        ]

    def to_json(self) -> dict:
        """Full session state; deterministic (all sets sorted)."""
        def filter_json(spec: FilterSpec) -> dict:
            out = {"id": spec.id, "kind": spec.kind,
                   "appliedAtStep": spec.applied_at_step,
                   "active": spec.active,
                   "effective": self._effective(spec),
                   "label": filter_label(spec)}
            if spec.kind == ATTRIBUTE:
                literal = spec.literal
                if isinstance(literal, tuple):
                    literal = list(literal)
                out.update(key=spec.key, op=spec.op, literal=literal)
            elif spec.kind == DEGREE:
                out.update(direction=spec.direction, op=spec.op,
                           threshold=spec.threshold)
            else:
                out.update(key=spec.key, binning=list(spec.binning),
                           labels=list(spec.labels))
            return out

        def step_json(step: PivotStep) -> dict:
            return {
                "index": step.index,
                "category": step.category,
                "baseSet": sorted(step.base_set),
                "activeSet": sorted(step.active_set),
                "witnessedEdges": sorted(step.witnessed_edges),
                "mode": step.mode_used,
                "modeRequested": step.mode_requested,
                "edgeClass": step.edge_class,
                "direction": step.direction,
                "warning": step.warning,
                "smart": step.smart,
                "filters": [filter_json(f) for f in step.direct_filters],
            }

        view = self.histogram()
        histogram = None
        if view is not None:
            histogram = {
                "key": view.attribute_key,
                "sort": list(view.sort),
                "binning": list(view.binning),
                "stepIndex": view.step_index,
                "bins": [
                    {"label": b.label, "count": b.count, "selected": b.selected}
                    for b in view.bins
                ],
            }

        return {
            "graphVersion": self.graph.version,
            "globalScope": self.global_scope,
            "steps": [step_json(s) for s in self.steps],
            "operationLog": list(self.operation_log),
            "histogram": histogram,
        }


def begin_session(graph: PropertyGraph,
                  usage_sink: Optional[Callable[[PivotSession], None]] = None
                  ) -> PivotSession:
    return PivotSession(graph, usage_sink)


def replay_log(graph: PropertyGraph, operation_log: list[dict],
               usage_sink: Optional[Callable[[PivotSession], None]] = None
               ) -> PivotSession:
    """Reconstruct a session purely from a logged operation sequence."""
    session = PivotSession(graph, usage_sink)
    session.operation_log = copy.deepcopy(list(operation_log))
    session._rebuild()
    return session
