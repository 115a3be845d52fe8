"""Reading and writing graph documents.

Two formats are supported:

* ``graphml-subset`` — GraphML with ``<key>`` declarations for attribute
  kinds, a reserved ``class`` key on both domains, and per-edge
  ``directed`` attributes. Namespaced and namespace-free documents both
  parse.
* ``json-nodelink`` — ``{"nodes": [{"id","class","attrs"}], "edges":
  [{"id","source","target","class","directed","attrs"}]}``.

Export is deterministic (ids sorted) so round-trips are stable.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from typing import Iterable, Optional

from .errors import ExtractionError, GraphLoadError
from .graph import Edge, Extraction, Node, PropertyGraph
from .values import BOOLEAN, INTEGER, REAL, TEXT, kind_of

GRAPHML = "graphml-subset"
JSON_NODELINK = "json-nodelink"

_FORMAT_ALIASES = {
    "graphml-subset": GRAPHML,
    "graphml": GRAPHML,
    "json-nodelink": JSON_NODELINK,
    "json": JSON_NODELINK,
}

_XML_TYPE_FOR_KIND = {TEXT: "string", INTEGER: "long", REAL: "double", BOOLEAN: "boolean"}
_KIND_FOR_XML_TYPE = {
    "string": TEXT,
    "int": INTEGER,
    "long": INTEGER,
    "integer": INTEGER,
    "float": REAL,
    "double": REAL,
    "real": REAL,
    "boolean": BOOLEAN,
    "bool": BOOLEAN,
}

CLASS_KEY = "class"


def normalize_format(name: str) -> str:
    try:
        return _FORMAT_ALIASES[name.lower()]
    except KeyError:
        raise GraphLoadError(
            f"unknown format {name!r}; expected {GRAPHML} or {JSON_NODELINK}"
        ) from None


def load_graph(source: str, format: str = JSON_NODELINK) -> PropertyGraph:
    fmt = normalize_format(format)
    if fmt == GRAPHML:
        return _load_graphml(source)
    return _load_json(source)


def dump_graph(g: PropertyGraph, format: str = JSON_NODELINK) -> str:
    fmt = normalize_format(format)
    nodes = [g.nodes[i] for i in sorted(g.nodes)]
    edges = [g.edges[i] for i in sorted(g.edges)]
    if fmt == GRAPHML:
        return _dump_graphml(nodes, edges)
    return _dump_json(nodes, edges)


def export_subgraph(g: PropertyGraph, x: Extraction, format: str = JSON_NODELINK) -> str:
    """Serialize exactly the extraction's nodes and edges."""
    fmt = normalize_format(format)
    missing = [i for i in x.node_ids if i not in g.nodes]
    missing += [i for i in x.edge_ids if i not in g.edges]
    if missing:
        raise ExtractionError(f"extraction references unknown ids: {sorted(missing)}")
    for eid in x.edge_ids:
        e = g.edges[eid]
        if e.source not in x.node_ids or e.target not in x.node_ids:
            raise ExtractionError(
                f"edge {eid!r} has an endpoint outside the extracted node set"
            )
    nodes = [g.nodes[i] for i in sorted(x.node_ids)]
    edges = [g.edges[i] for i in sorted(x.edge_ids)]
    if fmt == GRAPHML:
        return _dump_graphml(nodes, edges)
    return _dump_json(nodes, edges)


# -- json-nodelink -----------------------------------------------------------


def _load_json(source: str) -> PropertyGraph:
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise GraphLoadError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise GraphLoadError("top-level JSON value must be an object")

    def attrs_of(obj, what, ident):
        attrs = obj.get("attrs", {})
        if attrs is None:
            return {}
        if not isinstance(attrs, dict):
            raise GraphLoadError(f"{what} {ident!r}: attrs must be an object")
        for k, v in attrs.items():
            if v is not None and not isinstance(v, (str, int, float, bool)):
                raise GraphLoadError(f"{what} {ident!r}: attribute {k!r} is not a scalar")
        return attrs

    nodes = []
    for i, rec in enumerate(doc.get("nodes", [])):
        if not isinstance(rec, dict) or "id" not in rec or "class" not in rec:
            raise GraphLoadError(f"node #{i} must be an object with id and class")
        nid = str(rec["id"])
        nodes.append(Node(nid, str(rec["class"]), attrs_of(rec, "node", nid)))

    edges = []
    for i, rec in enumerate(doc.get("edges", [])):
        if not isinstance(rec, dict):
            raise GraphLoadError(f"edge #{i} must be an object")
        for req in ("id", "source", "target", "class"):
            if req not in rec:
                raise GraphLoadError(f"edge #{i} missing required field {req!r}")
        eid = str(rec["id"])
        edges.append(Edge(
            eid, str(rec["class"]), str(rec["source"]), str(rec["target"]),
            bool(rec.get("directed", False)), attrs_of(rec, "edge", eid),
        ))
    return PropertyGraph(nodes, edges)


def _json_attrs(attrs) -> dict:
    return {k: attrs[k] for k in sorted(attrs)}


def _dump_json(nodes: Iterable[Node], edges: Iterable[Edge]) -> str:
    doc = {
        "nodes": [
            {"id": n.id, "class": n.cls, "attrs": _json_attrs(n.attrs)} for n in nodes
        ],
        "edges": [
            {
                "id": e.id, "source": e.source, "target": e.target,
                "class": e.cls, "directed": e.directed, "attrs": _json_attrs(e.attrs),
            }
            for e in edges
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# -- graphml-subset ----------------------------------------------------------


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_typed(text: Optional[str], kind: str, where: str):
    raw = text or ""
    try:
        if kind == INTEGER:
            return int(raw)
        if kind == REAL:
            return float(raw)
        if kind == BOOLEAN:
            low = raw.strip().lower()
            if low in ("true", "1"):
                return True
            if low in ("false", "0"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise GraphLoadError(f"{where}: cannot parse {raw!r} as {kind}") from None
    return raw


def _load_graphml(source: str) -> PropertyGraph:
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        line, column = exc.position
        raise GraphLoadError(exc.msg.split(":")[0], line=line, column=column + 1) from exc
    if _local(root.tag) != "graphml":
        raise GraphLoadError(f"expected <graphml> root, found <{_local(root.tag)}>")

    keys: dict[str, tuple[str, str, str]] = {}   # key id -> (domain, attr name, kind)
    for el in root:
        if _local(el.tag) != "key":
            continue
        kid = el.get("id")
        domain = el.get("for", "node")
        name = el.get("attr.name")
        xml_type = (el.get("attr.type") or "string").lower()
        if kid is None or name is None:
            raise GraphLoadError("<key> requires id and attr.name")
        if xml_type not in _KIND_FOR_XML_TYPE:
            raise GraphLoadError(f"<key id={kid!r}>: unsupported attr.type {xml_type!r}")
        if kid in keys:
            raise GraphLoadError(f"duplicate <key> id {kid!r}")
        keys[kid] = (domain, name, _KIND_FOR_XML_TYPE[xml_type])

    graph_el = None
    for el in root:
        if _local(el.tag) == "graph":
            graph_el = el
            break
    if graph_el is None:
        raise GraphLoadError("document has no <graph> element")
    default_directed = graph_el.get("edgedefault", "undirected") == "directed"

    def read_data(el, domain: str, where: str) -> tuple[dict, Optional[str]]:
        attrs: dict = {}
        cls: Optional[str] = None
        for child in el:
            if _local(child.tag) != "data":
                continue
            ref = child.get("key")
            if ref not in keys:
                raise GraphLoadError(f"{where}: <data> references undeclared key {ref!r}")
            key_domain, name, kind = keys[ref]
            if key_domain not in (domain, "all"):
                raise GraphLoadError(
                    f"{where}: key {ref!r} is declared for {key_domain!r}, not {domain!r}"
                )
            value = _parse_typed(child.text, kind, where)
            if name == CLASS_KEY:
                cls = str(value)
            else:
                attrs[name] = value
        return attrs, cls

    nodes = []
    edges = []
    auto_edge = 0
    for el in graph_el:
        tag = _local(el.tag)
        if tag == "node":
            nid = el.get("id")
            if nid is None:
                raise GraphLoadError("<node> without id")
            attrs, cls = read_data(el, "node", f"node {nid!r}")
            if cls is None:
                raise GraphLoadError(f"node {nid!r} has no class data")
            nodes.append(Node(nid, cls, attrs))
        elif tag == "edge":
            src, dst = el.get("source"), el.get("target")
            if src is None or dst is None:
                raise GraphLoadError("<edge> requires source and target")
            eid = el.get("id")
            if eid is None:
                auto_edge += 1
                eid = f"_e{auto_edge}"
            attrs, cls = read_data(el, "edge", f"edge {eid!r}")
            if cls is None:
                raise GraphLoadError(f"edge {eid!r} has no class data")
            directed_attr = el.get("directed")
            directed = default_directed if directed_attr is None else directed_attr == "true"
            edges.append(Edge(eid, cls, src, dst, directed, attrs))
    return PropertyGraph(nodes, edges)


def _dump_graphml(nodes: Iterable[Node], edges: Iterable[Edge]) -> str:
    nodes = list(nodes)
    edges = list(edges)

    # one <key> per (domain, name, kind); the class key is always declared
    key_ids: dict[tuple[str, str, str], str] = {}

    def key_for(domain: str, name: str, kind: str) -> str:
        trip = (domain, name, kind)
        if trip not in key_ids:
            key_ids[trip] = f"d{len(key_ids)}"
        return key_ids[trip]

    key_for("node", CLASS_KEY, TEXT)
    key_for("edge", CLASS_KEY, TEXT)
    for n in nodes:
        for k in sorted(n.attrs):
            key_for("node", k, kind_of(n.attrs[k]))
    for e in edges:
        for k in sorted(e.attrs):
            key_for("edge", k, kind_of(e.attrs[k]))

    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    for (domain, name, kind), kid in key_ids.items():
        ET.SubElement(root, "key", {
            "id": kid, "for": domain, "attr.name": name,
            "attr.type": _XML_TYPE_FOR_KIND[kind],
        })
    graph_el = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "undirected"})

    def fmt_value(v) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    def write_data(el, domain, cls, attrs):
        d = ET.SubElement(el, "data", key=key_ids[(domain, CLASS_KEY, TEXT)])
        d.text = cls
        for k in sorted(attrs):
            v = attrs[k]
            d = ET.SubElement(el, "data", key=key_ids[(domain, k, kind_of(v))])
            d.text = fmt_value(v)

    for n in nodes:
        el = ET.SubElement(graph_el, "node", id=n.id)
        write_data(el, "node", n.cls, n.attrs)
    for e in edges:
        el = ET.SubElement(graph_el, "edge", {
            "id": e.id, "source": e.source, "target": e.target,
            "directed": "true" if e.directed else "false",
        })
        write_data(el, "edge", e.cls, e.attrs)

    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
