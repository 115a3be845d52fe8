"""Property-graph snapshots and the neighbor primitive.

A snapshot is immutable: every structural change (reification, derived
edges, promoted attributes) builds a new graph with ``version + 1``. The
neighbor query is indexed per target node class so its cost tracks the
frontier size, not the graph size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import (
    ClassCollisionError,
    DanglingEdgeError,
    DuplicateIdError,
    UnknownClassError,
)
from .values import AttributeValue, kind_of

ANY = "any"
OUTGOING = "outgoing"
INCOMING = "incoming"
DIRECTIONS = (ANY, OUTGOING, INCOMING)


@dataclass(frozen=True, slots=True)
class Node:
    id: str
    cls: str
    attrs: Mapping[str, AttributeValue] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class Edge:
    id: str
    cls: str
    source: str
    target: str
    directed: bool = True
    attrs: Mapping[str, AttributeValue] = field(default_factory=dict)


def _clean_attrs(attrs: Optional[Mapping[str, object]]) -> dict:
    """Drop explicit nulls (null == absent) and reject non-scalar values."""
    out = {}
    if attrs:
        for key, value in attrs.items():
            if value is None:
                continue
            kind_of(value)   # raises TypeError on unsupported types
            out[str(key)] = value
    return out


class PropertyGraph:
    """Immutable node/edge store with class-pair adjacency indexes."""

    __slots__ = (
        "nodes", "edges", "version", "derived_edge_classes", "renamed_classes",
        "node_classes", "edge_classes",
        "_by_class", "_nbr", "_eids",
    )

    def __init__(
        self,
        nodes: Iterable[Node],
        edges: Iterable[Edge],
        version: int = 1,
        derived_edge_classes: Iterable[str] = (),
        renamed_classes: Optional[Mapping[str, str]] = None,
    ):
        node_map: dict[str, Node] = {}
        for n in nodes:
            if n.id in node_map:
                raise DuplicateIdError(f"duplicate node id {n.id!r}")
            if not n.cls:
                raise ClassCollisionError(f"node {n.id!r} has an empty class name")
            node_map[n.id] = Node(n.id, n.cls, _clean_attrs(n.attrs))

        edge_map: dict[str, Edge] = {}
        for e in edges:
            if e.id in edge_map:
                raise DuplicateIdError(f"duplicate edge id {e.id!r}")
            for endpoint in (e.source, e.target):
                if endpoint not in node_map:
                    raise DanglingEdgeError(
                        f"edge {e.id!r} references missing node {endpoint!r}"
                    )
            edge_map[e.id] = Edge(e.id, e.cls, e.source, e.target, bool(e.directed),
                                  _clean_attrs(e.attrs))

        self.nodes = node_map
        self.edges = edge_map
        self.version = version
        self.derived_edge_classes = frozenset(derived_edge_classes)
        self.renamed_classes = dict(renamed_classes or {})

        by_class: dict[str, set[str]] = {}
        for n in node_map.values():
            by_class.setdefault(n.cls, set()).add(n.id)
        self._by_class = by_class
        self.node_classes = frozenset(by_class)
        self.edge_classes = frozenset(e.cls for e in edge_map.values())

        # Adjacency, keyed by the *neighbor's* class, parallel lists of
        # neighbor ids and witnessing edge ids. The unconstrained pivot path
        # only touches the id lists, which set.update consumes in bulk.
        nbr: dict[str, dict[str, list[str]]] = {}
        eids: dict[str, dict[str, list[str]]] = {}
        for e in edge_map.values():
            s, t = e.source, e.target
            cs, ct = node_map[s].cls, node_map[t].cls
            nbr.setdefault(ct, {}).setdefault(s, []).append(t)
            eids.setdefault(ct, {}).setdefault(s, []).append(e.id)
            if s != t:
                nbr.setdefault(cs, {}).setdefault(t, []).append(s)
                eids.setdefault(cs, {}).setdefault(t, []).append(e.id)
        self._nbr = nbr
        self._eids = eids

    # -- lookups ------------------------------------------------------------

    def require_node_class(self, name: str) -> str:
        if name not in self.node_classes:
            raise UnknownClassError(name, sorted(self.node_classes), "node")
        return name

    def require_edge_class(self, name: str) -> str:
        if name not in self.edge_classes:
            raise UnknownClassError(name, sorted(self.edge_classes), "edge")
        return name

    def nodes_of_class(self, cls: str) -> set[str]:
        self.require_node_class(cls)
        return set(self._by_class[cls])

    def attrs_of(self, node_id: str) -> Mapping[str, AttributeValue]:
        return self.nodes[node_id].attrs

    # -- the pivot primitive -------------------------------------------------

    def neighbors(
        self,
        seeds: Iterable[str],
        target_class: str,
        edge_class: Optional[str] = None,
        direction: str = ANY,
    ) -> set[str]:
        """All nodes of ``target_class`` adjacent to at least one seed.

        A seed of the target class is included only if some qualifying edge
        reaches it from a seed; self-loops qualify.
        """
        self.require_node_class(target_class)
        if edge_class is not None:
            self.require_edge_class(edge_class)
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")

        per_node = self._nbr.get(target_class)
        if not per_node:
            return set()

        out: set[str] = set()
        if edge_class is None and direction == ANY:
            for s in seeds:
                lst = per_node.get(s)
                if lst:
                    out.update(lst)
            return out

        per_edge = self._eids[target_class]
        edge_map = self.edges
        for s in seeds:
            lst = per_node.get(s)
            if not lst:
                continue
            for n, eid in zip(lst, per_edge[s]):
                e = edge_map[eid]
                if edge_class is not None and e.cls != edge_class:
                    continue
                if direction != ANY and e.directed:
                    if direction == OUTGOING and e.source != s:
                        continue
                    if direction == INCOMING and e.target != s:
                        continue
                out.add(n)
        return out

    def neighbors_with_witnesses(
        self,
        seeds: Iterable[str],
        target_class: str,
        edge_class: Optional[str] = None,
        direction: str = ANY,
    ) -> tuple[set[str], set[str]]:
        """neighbors() plus the ids of every edge that witnessed a member."""
        self.require_node_class(target_class)
        if edge_class is not None:
            self.require_edge_class(edge_class)
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")

        out: set[str] = set()
        witnesses: set[str] = set()
        per_node = self._nbr.get(target_class)
        if not per_node:
            return out, witnesses
        per_edge = self._eids[target_class]
        edge_map = self.edges
        unconstrained = edge_class is None and direction == ANY
        for s in seeds:
            lst = per_node.get(s)
            if not lst:
                continue
            for n, eid in zip(lst, per_edge[s]):
                if not unconstrained:
                    e = edge_map[eid]
                    if edge_class is not None and e.cls != edge_class:
                        continue
                    if direction != ANY and e.directed:
                        if direction == OUTGOING and e.source != s:
                            continue
                        if direction == INCOMING and e.target != s:
                            continue
                out.add(n)
                witnesses.add(eid)
        return out, witnesses

    # -- snapshot evolution ---------------------------------------------------

    def extended(
        self,
        new_nodes: Iterable[Node] = (),
        new_edges: Iterable[Edge] = (),
        derived_edge_classes: Iterable[str] = (),
        renamed_classes: Optional[Mapping[str, str]] = None,
    ) -> "PropertyGraph":
        """New snapshot with the additions applied and version bumped."""
        renames = dict(self.renamed_classes)
        renames.update(renamed_classes or {})
        return PropertyGraph(
            itertools.chain(self.nodes.values(), new_nodes),
            itertools.chain(self.edges.values(), new_edges),
            version=self.version + 1,
            derived_edge_classes=self.derived_edge_classes | frozenset(derived_edge_classes),
            renamed_classes=renames,
        )


# -- reification ---------------------------------------------------------------


def _fresh_id(base: str, taken: set[str]) -> str:
    if base not in taken:
        taken.add(base)
        return base
    for k in itertools.count(2):
        cand = f"{base}{k}"
        if cand not in taken:
            taken.add(cand)
            return cand
    raise AssertionError("unreachable")


def reify_attributed_edges(g: PropertyGraph) -> PropertyGraph:
    """Replace every edge carrying attributes by a node plus two plain edges.

    The new node takes the edge's class name and attributes; when that class
    name already names a node class, the reified class gets an ``_edge``
    suffix (bumped numerically until free) and the rename is recorded on the
    resulting snapshot. Attribute-free edges pass through untouched. A graph
    with nothing to reify is returned as-is, same snapshot.
    """
    attributed = [e for e in g.edges.values() if e.attrs]
    if not attributed:
        return g

    class_names: dict[str, str] = {}
    renames: dict[str, str] = {}
    taken_classes = set(g.node_classes)
    for e in attributed:
        if e.cls in class_names:
            continue
        name = e.cls
        if name in taken_classes:
            name = _fresh_id(f"{e.cls}_edge", taken_classes)
            renames[e.cls] = name
        else:
            taken_classes.add(name)
        class_names[e.cls] = name

    taken_node_ids = set(g.nodes)
    taken_edge_ids = set(g.edges)
    kept_edges = [e for e in g.edges.values() if not e.attrs]
    new_nodes: list[Node] = []
    new_edges: list[Edge] = list(kept_edges)
    for e in attributed:
        nid = _fresh_id(e.id, taken_node_ids)
        new_nodes.append(Node(nid, class_names[e.cls], dict(e.attrs)))
        eid_in = _fresh_id(f"{e.id}.s", taken_edge_ids)
        eid_out = _fresh_id(f"{e.id}.t", taken_edge_ids)
        new_edges.append(Edge(eid_in, e.cls, e.source, nid, e.directed, {}))
        new_edges.append(Edge(eid_out, e.cls, nid, e.target, e.directed, {}))

    merged_renames = dict(g.renamed_classes)
    merged_renames.update(renames)
    return PropertyGraph(
        itertools.chain(g.nodes.values(), new_nodes),
        new_edges,
        version=g.version + 1,
        derived_edge_classes=g.derived_edge_classes,
        renamed_classes=merged_renames,
    )


# -- schema summary -------------------------------------------------------------


@dataclass(frozen=True)
class NodeClassInfo:
    name: str
    count: int
    attributes: tuple[tuple[str, str], ...]   # (key, kind or "mixed"), sorted by key


@dataclass(frozen=True)
class EdgeClassInfo:
    name: str
    count: int
    directedness: str                          # directed | undirected | mixed
    derived: bool = False                      # created by an adaptation rewrite


@dataclass(frozen=True)
class ConnectionEntry:
    """One pivot affordance from the perspective of a node class."""

    edge_class: str
    other_class: str
    count: int
    reverse: bool                              # only reachable against edge direction


@dataclass(frozen=True)
class SchemaSummary:
    node_classes: tuple[NodeClassInfo, ...]
    edge_classes: tuple[EdgeClassInfo, ...]
    connectivity: Mapping[tuple[str, str, str], int]
    # (source class, edge class, target class, count, directed) with the raw
    # orientation kept, so per-class views can tell forward from reverse
    links: tuple[tuple[str, str, str, int, bool], ...] = field(default=(), repr=False)

    def connections(self, node_class: str) -> list[ConnectionEntry]:
        out: list[ConnectionEntry] = []
        for src, ec, dst, count, directed in self.links:
            if not directed:
                if src == node_class:
                    out.append(ConnectionEntry(ec, dst, count, False))
                elif dst == node_class:
                    out.append(ConnectionEntry(ec, src, count, False))
                continue
            if src == node_class:
                out.append(ConnectionEntry(ec, dst, count, False))
            if dst == node_class:
                out.append(ConnectionEntry(ec, src, count, True))
        out.sort(key=lambda c: (c.edge_class, c.other_class, c.reverse))
        return out


def _attr_kinds(items) -> tuple[tuple[str, str], ...]:
    kinds: dict[str, set[str]] = {}
    for obj in items:
        for key, value in obj.attrs.items():
            kinds.setdefault(key, set()).add(kind_of(value))
    return tuple(
        (key, next(iter(ks)) if len(ks) == 1 else "mixed")
        for key, ks in sorted(kinds.items())
    )


def schema_summary(g: PropertyGraph) -> SchemaSummary:
    node_infos = []
    for cls in sorted(g.node_classes):
        members = [g.nodes[i] for i in g._by_class[cls]]
        node_infos.append(NodeClassInfo(cls, len(members), _attr_kinds(members)))

    per_edge_class: dict[str, list[Edge]] = {}
    for e in g.edges.values():
        per_edge_class.setdefault(e.cls, []).append(e)
    edge_infos = []
    for cls in sorted(per_edge_class):
        members = per_edge_class[cls]
        flags = {e.directed for e in members}
        directedness = "mixed" if len(flags) == 2 else ("directed" if True in flags else "undirected")
        edge_infos.append(EdgeClassInfo(cls, len(members), directedness,
                                        cls in g.derived_edge_classes))

    raw: dict[tuple[str, str, str, bool], int] = {}
    for e in g.edges.values():
        cs, ct = g.nodes[e.source].cls, g.nodes[e.target].cls
        if e.directed:
            key = (cs, e.cls, ct, True)
        else:
            a, b = sorted((cs, ct))
            key = (a, e.cls, b, False)
        raw[key] = raw.get(key, 0) + 1

    connectivity: dict[tuple[str, str, str], int] = {}
    links = []
    for (src, ec, dst, directed), count in sorted(raw.items()):
        connectivity[(src, ec, dst)] = connectivity.get((src, ec, dst), 0) + count
        links.append((src, ec, dst, count, directed))

    return SchemaSummary(
        node_classes=tuple(node_infos),
        edge_classes=tuple(edge_infos),
        connectivity=connectivity,
        links=tuple(links),
    )


# -- extraction ------------------------------------------------------------------


@dataclass(frozen=True)
class Extraction:
    """A traversed subgraph: nodes, witnessing edges, and per-step provenance."""

    node_ids: frozenset[str]
    edge_ids: frozenset[str]
    provenance: tuple[tuple[int, str, int], ...]   # (step index, category, set size)
