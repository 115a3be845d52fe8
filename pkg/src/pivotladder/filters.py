"""Direct filters and histogram grouping.

Three filter kinds exist. Attribute predicates compare one attribute key
against a literal. Degree predicates count edges incident to a node within
the current step's seed-and-neighbor subgraph (the witnessed edges), never
the whole graph. Bin selections keep the nodes falling into chosen
histogram bins; they are re-evaluated against whatever candidate set is
present at replay time, so snipping an upstream filter changes them
deterministically.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .errors import FilterKindError, UnknownLabelError
from .graph import ANY, DIRECTIONS, INCOMING, OUTGOING, PropertyGraph
from .values import (
    BOOLEAN,
    INTEGER,
    REAL,
    TEXT,
    kind_of,
    value_label,
    values_equal,
    values_ordered,
)

ATTRIBUTE = "attribute"
DEGREE = "degree"
BINS = "bins"

COMPARISONS = ("==", "!=", "<", "<=", ">", ">=")
ATTRIBUTE_OPS = COMPARISONS + ("contains", "in")
ORDERING_OPS = ("<", "<=", ">", ">=")

CATEGORICAL = ("categorical",)

MISSING_LABEL = "∅"


@dataclass(frozen=True)
class FilterSpec:
    """One direct filter. Only the fields for its kind are populated."""

    id: int
    kind: str
    applied_at_step: int
    active: bool = True
    key: Optional[str] = None
    op: Optional[str] = None
    literal: object = None
    direction: Optional[str] = None
    threshold: Optional[int] = None
    binning: Optional[tuple] = None
    labels: Optional[tuple[str, ...]] = None

    def with_active(self, active: bool) -> "FilterSpec":
        return replace(self, active=active)


def make_attribute_filter(fid: int, step: int, key: str, op: str, literal) -> FilterSpec:
    if op not in ATTRIBUTE_OPS:
        raise FilterKindError(f"unknown operator {op!r}")
    if op == "in":
        if not isinstance(literal, (list, tuple)):
            raise FilterKindError("'in' requires a list of literals")
        literal = tuple(literal)
        for member in literal:
            kind_of(member)
    else:
        lit_kind = kind_of(literal)
        if op in ORDERING_OPS and lit_kind not in (INTEGER, REAL):
            raise FilterKindError(f"{op!r} requires a numeric literal, got {lit_kind}")
        if op == "contains" and lit_kind != TEXT:
            raise FilterKindError(f"'contains' requires a text literal, got {lit_kind}")
    return FilterSpec(fid, ATTRIBUTE, step, key=key, op=op, literal=literal)


def make_degree_filter(fid: int, step: int, direction: str, op: str, threshold) -> FilterSpec:
    if direction not in DIRECTIONS:
        raise FilterKindError(f"degree direction must be one of {DIRECTIONS}")
    if op not in COMPARISONS:
        raise FilterKindError(f"degree predicates accept {COMPARISONS}, got {op!r}")
    if kind_of(threshold) != INTEGER:
        raise FilterKindError("degree threshold must be an integer")
    return FilterSpec(fid, DEGREE, step, op=op, direction=direction, threshold=threshold)


def make_bins_filter(
    fid: int, step: int, key: str, binning: tuple, labels: Sequence[str]
) -> FilterSpec:
    return FilterSpec(fid, BINS, step, key=key, binning=tuple(binning),
                      labels=tuple(labels))


_DIRECTION_WORD = {ANY: "any", INCOMING: "in", OUTGOING: "out"}


def literal_text(value) -> str:
    if isinstance(value, tuple):
        return "(" + ", ".join(literal_text(v) for v in value) + ")"
    return json.dumps(value, ensure_ascii=False)


def filter_label(spec: FilterSpec) -> str:
    """Short human-readable rendering, e.g. for breadcrumbs and dialogs."""
    if spec.kind == ATTRIBUTE:
        return f"{spec.key} {spec.op} {literal_text(spec.literal)}"
    if spec.kind == DEGREE:
        return f"degree {_DIRECTION_WORD[spec.direction]} {spec.op} {spec.threshold}"
    if spec.kind == BINS:
        labels = ", ".join(spec.labels or ())
        return f"{spec.key} in bins {{{labels}}}"
    return f"<{spec.kind}>"


# -- evaluation ---------------------------------------------------------------


def _attribute_match(attrs, key: str, op: str, literal) -> bool:
    present = key in attrs
    if not present:
        return op == "!="
    value = attrs[key]
    if op == "==":
        return values_equal(value, literal)
    if op == "!=":
        return not values_equal(value, literal)
    if op in ORDERING_OPS:
        return values_ordered(op, value, literal)
    if op == "contains":
        return kind_of(value) == TEXT and literal in value
    if op == "in":
        return any(values_equal(value, member) for member in literal)
    raise FilterKindError(f"unknown operator {op!r}")


def degree_counts(g: PropertyGraph, witness_edges: Iterable[str], direction: str) -> Counter:
    """Edges incident to each node among the witnessed edges, by direction.

    Undirected edges count for every direction; a self-loop counts once.
    """
    counts: Counter = Counter()
    for eid in witness_edges:
        e = g.edges[eid]
        if not e.directed:
            counts[e.source] += 1
            if e.target != e.source:
                counts[e.target] += 1
        elif direction == ANY:
            counts[e.source] += 1
            if e.target != e.source:
                counts[e.target] += 1
        elif direction == OUTGOING:
            counts[e.source] += 1
        elif direction == INCOMING:
            counts[e.target] += 1
    return counts


def _compare_int(a: int, op: str, b: int) -> bool:
    if op == "==":
        return a == b
    if op == "!=":
        return a != b
    return values_ordered(op, a, b)


def evaluate_filter(
    g: PropertyGraph,
    spec: FilterSpec,
    candidates: set[str],
    witness_edges: frozenset[str],
) -> set[str]:
    """Subset of ``candidates`` satisfying the filter."""
    if spec.kind == ATTRIBUTE:
        return {
            n for n in candidates
            if _attribute_match(g.nodes[n].attrs, spec.key, spec.op, spec.literal)
        }
    if spec.kind == DEGREE:
        counts = degree_counts(g, witness_edges, spec.direction)
        return {
            n for n in candidates
            if _compare_int(counts.get(n, 0), spec.op, spec.threshold)
        }
    if spec.kind == BINS:
        chosen = set(spec.labels or ())
        kept: set[str] = set()
        for label, members in compute_bin_members(g, candidates, spec.key, spec.binning):
            if label in chosen:
                kept.update(members)
        return kept
    raise FilterKindError(f"unknown filter kind {spec.kind!r}")


# -- histograms ---------------------------------------------------------------


@dataclass(frozen=True)
class HistogramBin:
    label: str
    count: int
    selected: bool = False


@dataclass(frozen=True)
class HistogramView:
    attribute_key: str
    bins: tuple[HistogramBin, ...]
    sort: tuple[str, str]          # (label|count, asc|desc)
    binning: tuple                 # ("categorical",) or ("equal-width", n)
    step_index: int


_KIND_RANK = {INTEGER: 0, REAL: 0, BOOLEAN: 1, TEXT: 2}


def _format_bound(x: float) -> str:
    return f"{x:g}"


def compute_bin_members(
    g: PropertyGraph, node_ids: set[str], key: str, binning: tuple
) -> list[tuple[str, set[str]]]:
    """Ordered (label, member set) pairs; labels unique; the "∅" bin is last.

    Categorical binning makes one bin per distinct value under strict value
    kinds; when two values of different kinds render to the same label, the
    kind is appended to keep labels selectable.
    """
    if not node_ids:
        return []
    if binning[0] == "categorical":
        groups: dict[tuple, set[str]] = {}
        missing: set[str] = set()
        for n in node_ids:
            attrs = g.nodes[n].attrs
            if key in attrs:
                v = attrs[key]
                groups.setdefault((kind_of(v), v), set()).add(n)
            else:
                missing.add(n)
        ordered = sorted(groups, key=lambda kv: (_KIND_RANK[kv[0]], kv[1], kv[0]))
        labels = [value_label(v) for _, v in ordered]
        seen = Counter(labels)
        out = []
        for (kind, v), label in zip(ordered, labels):
            if seen[label] > 1:
                label = f"{label} ({kind})"
            out.append((label, groups[(kind, v)]))
        if missing:
            out.append((MISSING_LABEL, missing))
        return out

    if binning[0] == "equal-width":
        n_bins = int(binning[1])
        if n_bins < 1:
            raise FilterKindError("equal-width binning needs at least one bin")
        numeric: dict[str, float] = {}
        rest: set[str] = set()
        for n in node_ids:
            attrs = g.nodes[n].attrs
            v = attrs.get(key)
            if v is not None and kind_of(v) in (INTEGER, REAL):
                numeric[n] = v
            else:
                rest.add(n)
        out = []
        if numeric:
            lo = min(numeric.values())
            hi = max(numeric.values())
            if lo == hi:
                label = f"[{_format_bound(lo)}, {_format_bound(hi)}]"
                out.append((label, set(numeric)))
            else:
                width = (hi - lo) / n_bins
                members: list[set[str]] = [set() for _ in range(n_bins)]
                for node, v in numeric.items():
                    idx = min(int((v - lo) / width), n_bins - 1)
                    members[idx].add(node)
                for i in range(n_bins):
                    a = lo + i * width
                    b = lo + (i + 1) * width
                    closer = "]" if i == n_bins - 1 else ")"
                    label = f"[{_format_bound(a)}, {_format_bound(b)}{closer}"
                    out.append((label, members[i]))
        if rest:
            out.append((MISSING_LABEL, rest))
        return out

    raise FilterKindError(f"unknown binning {binning!r}")


def build_histogram(
    g: PropertyGraph,
    node_ids: set[str],
    key: str,
    sort: tuple[str, str] = ("label", "asc"),
    binning: tuple = CATEGORICAL,
    step_index: int = 0,
) -> HistogramView:
    by, order = sort
    if by not in ("label", "count") or order not in ("asc", "desc"):
        raise FilterKindError(f"unsupported sort {sort!r}")
    pairs = compute_bin_members(g, node_ids, key, binning)
    bins = [HistogramBin(label, len(members)) for label, members in pairs]
    if by == "count":
        bins.sort(key=lambda b: b.count)
    if order == "desc":
        bins.reverse()
    return HistogramView(key, tuple(bins), (by, order), tuple(binning), step_index)


def require_labels(view: HistogramView, labels: Sequence[str]) -> tuple[str, ...]:
    known = {b.label for b in view.bins}
    bad = [lab for lab in labels if lab not in known]
    if bad:
        raise UnknownLabelError(
            f"unknown bin labels {bad}; histogram has {sorted(known)}"
        )
    return tuple(labels)
