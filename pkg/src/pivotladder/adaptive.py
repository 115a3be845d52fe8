"""Usage-driven graph rewrites.

Finished chains are normalized into pattern signatures and appended to a
usage log. Two shapes are mined:

* Connection — a contiguous palindromic window of the category sequence,
  X, π, Y, reverse(π), X with π nonempty: the user went somewhere through
  intermediaries and came straight back. Signature keeps the classes and
  whether the far end carried an effective direct filter; literals and set
  contents are dropped.
* AttributeCorrelation — two different classes filtered on the same
  attribute key within one chain, in visit order.

Once a signature's occurrence count reaches the threshold, a rewrite is
proposed: materializing direct edges for the walked connection, or
promoting the shared attribute into value nodes. Rewrites are additive and
produce a new graph snapshot; applying the same proposal twice collides on
the derived class name and is rejected, which keeps the version history
free of duplicate rewrites.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import AdaptationError, ClassCollisionError
from .filters import ATTRIBUTE, BINS
from .graph import Edge, Node, PropertyGraph
from .values import kind_of, values_equal

CONNECTION = "connection"
CORRELATION = "correlation"

DERIVE_EDGES = "DeriveEdges"
PROMOTE_ATTRIBUTE = "PromoteAttribute"

DEFAULT_THRESHOLD = 3


# -- signatures -----------------------------------------------------------------


def _effective_filters(session, step) -> list:
    return [f for f in step.direct_filters if f.active and session.global_scope]


def chain_signatures(session) -> list[tuple]:
    """Normalized pattern signatures found in one finished chain."""
    steps = session.steps
    cats = [s.category for s in steps]
    n = len(cats)
    sigs: list[tuple] = []

    # palindromic windows: length 2k+3, k >= 1
    for k in range(1, (n - 1) // 2 + 1):
        span = 2 * k + 2
        for i in range(0, n - span):
            if all(cats[i + j] == cats[i + span - j] for j in range(k + 1)):
                apex = steps[i + k + 1]
                filtered = bool(_effective_filters(session, apex))
                sigs.append((
                    CONNECTION, cats[i], tuple(cats[i + 1:i + k + 1]),
                    apex.category, filtered,
                ))

    # same attribute key filtered on two different classes, visit order kept
    keyed: list[tuple[int, str, str]] = []
    for step in steps:
        for f in _effective_filters(session, step):
            if f.kind in (ATTRIBUTE, BINS) and f.key is not None:
                keyed.append((step.index, step.category, f.key))
    seen: set[tuple] = set()
    for a in range(len(keyed)):
        for b in range(a + 1, len(keyed)):
            ia, ca, ka = keyed[a]
            ib, cb, kb = keyed[b]
            if ka == kb and ca != cb and ia < ib:
                sig = (CORRELATION, ca, cb, ka)
                if sig not in seen:
                    seen.add(sig)
                    sigs.append(sig)
    return sigs


@dataclass(frozen=True)
class LogEntry:
    seq: int
    signature: tuple
    timestamp: float
    session_id: str

    def to_json(self) -> dict:
        sig = list(self.signature)
        if sig[0] == CONNECTION:
            sig[2] = list(sig[2])
        return {"seq": self.seq, "signature": sig,
                "timestamp": self.timestamp, "sessionId": self.session_id}


def _signature_from_json(raw: list) -> tuple:
    if raw[0] == CONNECTION:
        return (CONNECTION, raw[1], tuple(raw[2]), raw[3], bool(raw[4]))
    return (CORRELATION, raw[1], raw[2], raw[3])


class UsageLog:
    """Append-only record of normalized chain signatures."""

    def __init__(self):
        self.entries: list[LogEntry] = []

    def record_chain(self, session, session_id: str = "local",
                     timestamp: Optional[float] = None) -> list[tuple]:
        stamp = time.time() if timestamp is None else timestamp
        found = chain_signatures(session)
        for sig in found:
            self.entries.append(LogEntry(len(self.entries), sig, stamp, session_id))
        return found

    def record_signature(self, sig: tuple, session_id: str = "test",
                         timestamp: float = 0.0) -> None:
        self.entries.append(LogEntry(len(self.entries), sig, timestamp, session_id))

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_json(), ensure_ascii=False) + "\n"
                       for e in self.entries)

    @classmethod
    def from_jsonl(cls, text: str) -> "UsageLog":
        log = cls()
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            log.entries.append(LogEntry(
                len(log.entries), _signature_from_json(raw["signature"]),
                raw.get("timestamp", 0.0), raw.get("sessionId", "?"),
            ))
        return log


# -- proposals ------------------------------------------------------------------


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")


def _digest(sig: tuple) -> str:
    payload = json.dumps(sig, default=list, sort_keys=True)
    return hashlib.md5(payload.encode()).hexdigest()[:6]


@dataclass(frozen=True)
class AdaptationProposal:
    id: str
    rewrite: str                     # DeriveEdges | PromoteAttribute
    signature: tuple
    occurrence_count: int
    threshold: int
    # DeriveEdges
    new_edge_class: Optional[str] = None
    start_class: Optional[str] = None
    via_path: Optional[tuple[str, ...]] = None
    end_class: Optional[str] = None
    # PromoteAttribute
    new_node_class: Optional[str] = None
    attribute_key: Optional[str] = None
    affected_classes: Optional[tuple[str, ...]] = None

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "rewrite": self.rewrite,
            "occurrenceCount": self.occurrence_count,
            "threshold": self.threshold,
        }
        if self.rewrite == DERIVE_EDGES:
            out.update(newEdgeClass=self.new_edge_class,
                       startClass=self.start_class,
                       viaPath=list(self.via_path),
                       endClass=self.end_class,
                       filteredAtEnd=self.signature[4])
        else:
            out.update(newNodeClass=self.new_node_class,
                       attributeKey=self.attribute_key,
                       affectedClasses=list(self.affected_classes))
        return out


def _proposal_for(sig: tuple, count: int, theta: int) -> AdaptationProposal:
    if sig[0] == CONNECTION:
        _, start, via, end, _filtered = sig
        name = "derived_" + "_".join(_slug(c) for c in (start, *via, end))
        return AdaptationProposal(
            id=f"connect-{_slug(start)}-{_slug(end)}-{_digest(sig)}",
            rewrite=DERIVE_EDGES, signature=sig,
            occurrence_count=count, threshold=theta,
            new_edge_class=name, start_class=start, via_path=via, end_class=end,
        )
    _, cls_a, cls_b, key = sig
    return AdaptationProposal(
        id=f"promote-{_slug(key)}-{_digest(sig)}",
        rewrite=PROMOTE_ATTRIBUTE, signature=sig,
        occurrence_count=count, threshold=theta,
        new_node_class=key[:1].upper() + key[1:],
        attribute_key=key, affected_classes=(cls_a, cls_b),
    )


def detect_patterns(log: UsageLog, theta: int = DEFAULT_THRESHOLD) -> list[AdaptationProposal]:
    """Proposals for every signature seen at least ``theta`` times.

    Ordered by occurrence count descending; ties broken by first appearance.
    """
    if theta < 1:
        raise AdaptationError("threshold must be at least 1")
    counts: dict[tuple, int] = {}
    first_seen: dict[tuple, int] = {}
    for entry in log.entries:
        counts[entry.signature] = counts.get(entry.signature, 0) + 1
        first_seen.setdefault(entry.signature, entry.seq)
    hits = [sig for sig, c in counts.items() if c >= theta]
    hits.sort(key=lambda sig: (-counts[sig], first_seen[sig]))
    return [_proposal_for(sig, counts[sig], theta) for sig in hits]


# -- rewrites ---------------------------------------------------------------------


def _fresh(base: str, taken: set[str]) -> str:
    cand = base
    k = 1
    while cand in taken:
        k += 1
        cand = f"{base}.{k}"
    taken.add(cand)
    return cand


def materialize_connection(g: PropertyGraph, proposal: AdaptationProposal) -> PropertyGraph:
    """Add one undirected edge (x, y) for every class-path instance.

    The pair (x, y) gets exactly one derived edge no matter how many
    intermediate paths witness it; a node connected back to itself through
    the path gets a self-loop, which keeps a single pivot over the derived
    class equal to the composed fan-out chain.
    """
    if proposal.rewrite != DERIVE_EDGES:
        raise AdaptationError(f"not a {DERIVE_EDGES} proposal: {proposal.id}")
    for cls in (proposal.start_class, *proposal.via_path, proposal.end_class):
        g.require_node_class(cls)
    name = proposal.new_edge_class
    if name in g.edge_classes or name in g.derived_edge_classes:
        raise ClassCollisionError(f"edge class {name!r} already exists")

    pairs: set[tuple[str, str]] = set()
    for x in sorted(g.nodes_of_class(proposal.start_class)):
        frontier = {x}
        for via in proposal.via_path:
            frontier = g.neighbors(frontier, via)
            if not frontier:
                break
        else:
            for y in g.neighbors(frontier, proposal.end_class):
                pairs.add((x, y) if x <= y else (y, x))

    taken = set(g.edges)
    new_edges = [
        Edge(_fresh(f"{name}.{i}", taken), name, x, y, False, {})
        for i, (x, y) in enumerate(sorted(pairs), start=1)
    ]
    return g.extended(new_edges=new_edges, derived_edge_classes=[name])


def promote_attribute(g: PropertyGraph, proposal: AdaptationProposal) -> PropertyGraph:
    """Lift an attribute into value nodes linked to their bearers.

    One node per distinct non-null value across the affected classes; nodes
    missing the key get no edge. The original attribute stays in place.
    """
    if proposal.rewrite != PROMOTE_ATTRIBUTE:
        raise AdaptationError(f"not a {PROMOTE_ATTRIBUTE} proposal: {proposal.id}")
    for cls in proposal.affected_classes:
        g.require_node_class(cls)
    node_class = proposal.new_node_class
    if node_class in g.node_classes:
        raise ClassCollisionError(f"node class {node_class!r} already exists")
    edge_class = f"has_{_slug(proposal.attribute_key)}"
    if edge_class in g.edge_classes or edge_class in g.derived_edge_classes:
        raise ClassCollisionError(f"edge class {edge_class!r} already exists")

    key = proposal.attribute_key
    bearers: list[tuple[str, object]] = []
    for cls in proposal.affected_classes:
        for nid in sorted(g.nodes_of_class(cls)):
            attrs = g.nodes[nid].attrs
            if key in attrs:
                bearers.append((nid, attrs[key]))
    if not bearers:
        raise AdaptationError(
            f"attribute {key!r} is absent on all nodes of {list(proposal.affected_classes)}"
        )

    taken_nodes = set(g.nodes)
    value_nodes: dict[tuple, Node] = {}
    for _, value in bearers:
        vk = (kind_of(value), value)
        if vk not in value_nodes:
            vid = _fresh(f"{node_class}.{_slug(str(value))}", taken_nodes)
            value_nodes[vk] = Node(vid, node_class, {key: value})

    taken_edges = set(g.edges)
    new_edges = [
        Edge(_fresh(f"{edge_class}.{i}", taken_edges), edge_class,
             nid, value_nodes[(kind_of(value), value)].id, False, {})
        for i, (nid, value) in enumerate(bearers, start=1)
    ]
    return g.extended(new_nodes=value_nodes.values(), new_edges=new_edges,
                      derived_edge_classes=[edge_class])


def apply_proposal(g: PropertyGraph, proposal: AdaptationProposal) -> PropertyGraph:
    if proposal.rewrite == DERIVE_EDGES:
        return materialize_connection(g, proposal)
    return promote_attribute(g, proposal)


# -- equivalence checking ----------------------------------------------------------


def _subsets(ids: list[str], limit_exp: int, sample: int, seed: int) -> Iterable[frozenset]:
    """All subsets when 2^n is small enough, deterministic samples otherwise."""
    n = len(ids)
    if n <= limit_exp:
        for mask in range(1 << n):
            yield frozenset(ids[i] for i in range(n) if mask >> i & 1)
        return
    rng = random.Random(seed)
    yield frozenset()
    yield frozenset(ids)
    for _ in range(sample - 2):
        yield frozenset(i for i in ids if rng.random() < 0.5)


def equivalence_report(g: PropertyGraph, g2: PropertyGraph,
                       proposal: AdaptationProposal,
                       limit_exp: int = 8, sample: int = 200) -> dict:
    """Check the rewrite against its definition, seed subset by seed subset.

    DeriveEdges: a single pivot over the new class in the rewritten graph
    must equal the composed fan-out chain through the via path in the
    original. PromoteAttribute: the two-hop pivot through the value class
    must equal the attribute join oracle.
    """
    counterexamples: list[dict] = []
    checked = 0

    if proposal.rewrite == DERIVE_EDGES:
        extent = sorted(g.nodes_of_class(proposal.start_class))
        for seeds in _subsets(extent, limit_exp, sample, seed=0x5EED):
            composed = set(seeds)
            for via in proposal.via_path:
                composed = g.neighbors(composed, via)
            composed = g.neighbors(composed, proposal.end_class)
            direct = g2.neighbors(seeds, proposal.end_class,
                                  edge_class=proposal.new_edge_class)
            checked += 1
            if composed != direct:
                counterexamples.append({
                    "seeds": sorted(seeds),
                    "composed": sorted(composed),
                    "direct": sorted(direct),
                })
    else:
        key = proposal.attribute_key
        cls_x, cls_y = proposal.affected_classes[0], proposal.affected_classes[-1]
        extent = sorted(g.nodes_of_class(cls_x))
        y_nodes = [(y, g2.nodes[y].attrs.get(key)) for y in g2.nodes_of_class(cls_y)]
        for seeds in _subsets(extent, min(limit_exp, 6), sample, seed=0x5EED):
            seed_values = [g2.nodes[x].attrs[key] for x in seeds
                           if key in g2.nodes[x].attrs]
            oracle = {
                y for y, yv in y_nodes
                if yv is not None and any(values_equal(yv, sv) for sv in seed_values)
            }
            hop = g2.neighbors(seeds, proposal.new_node_class)
            pivoted = g2.neighbors(hop, cls_y)
            checked += 1
            if oracle != pivoted:
                counterexamples.append({
                    "seeds": sorted(seeds),
                    "oracle": sorted(oracle),
                    "pivot": sorted(pivoted),
                })

    return {
        "proposal": proposal.id,
        "rewrite": proposal.rewrite,
        "subsetsChecked": checked,
        "equal": not counterexamples,
        "counterexamples": counterexamples[:10],
    }
