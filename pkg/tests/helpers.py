"""Shared fixture graphs, generators, and brute-force oracles."""

from __future__ import annotations

import random

from pivotladder.graph import Edge, Node, PropertyGraph


# ---- hand-built fixtures ----

def clinic_graph() -> PropertyGraph:
    """Three doctors, two patients, four treats edges."""
    nodes = [
        Node("alice", "Doctor", {"name": "Alice"}),
        Node("dave", "Doctor", {"name": "Dave"}),
        Node("eve", "Doctor", {"name": "Eve"}),
        Node("bob", "Patient", {"name": "Bob", "sex": "male"}),
        Node("carol", "Patient", {"name": "Carol", "sex": "female"}),
    ]
    edges = [
        Edge("t1", "treats", "alice", "bob"),
        Edge("t2", "treats", "alice", "carol"),
        Edge("t3", "treats", "dave", "bob"),
        Edge("t4", "treats", "eve", "carol"),
    ]
    return PropertyGraph(nodes, edges)


def insurance_graph() -> PropertyGraph:
    """Doctors, patients, insurers; Pc is D2's patient but shares I1."""
    nodes = [
        Node("D1", "Doctor", {"name": "D1"}),
        Node("D2", "Doctor", {"name": "D2"}),
        Node("Pa", "Patient", {"name": "Pa"}),
        Node("Pb", "Patient", {"name": "Pb"}),
        Node("Pc", "Patient", {"name": "Pc"}),
        Node("I1", "Insurer", {"name": "I1"}),
        Node("I2", "Insurer", {"name": "I2"}),
    ]
    edges = [
        Edge("t1", "treats", "D1", "Pa"),
        Edge("t2", "treats", "D1", "Pb"),
        Edge("t3", "treats", "D2", "Pc"),
        Edge("i1", "insuredBy", "Pa", "I1"),
        Edge("i2", "insuredBy", "Pb", "I2"),
        Edge("i3", "insuredBy", "Pc", "I1"),
    ]
    return PropertyGraph(nodes, edges)


def football_graph() -> PropertyGraph:
    """Teams, players, stadiums, games, and per-team game stats.

    Ohio State is undefeated; every loser overall also lost to Ohio State,
    which the scope-off exploration flow relies on.
    """
    nodes = [
        Node("t_fsu", "Team", {"name": "Florida State", "conference": "ACC"}),
        Node("t_osu", "Team", {"name": "Ohio State", "conference": "Big Ten"}),
        Node("t_ind", "Team", {"name": "Indiana", "conference": "Big Ten"}),
        Node("t_pur", "Team", {"name": "Purdue", "conference": "Big Ten"}),
        Node("s_doak", "Stadium", {"name": "Doak Campbell Stadium",
                                   "capacity": 79560}),
        Node("s_shoe", "Stadium", {"name": "Ohio Stadium",
                                   "capacity": 102780}),
        Node("p_qb", "Player", {"name": "Quinn Harlow", "position": "QB",
                                "year": 3}),
        Node("p_wr1", "Player", {"name": "Wes Tate", "position": "WR",
                                 "year": 2}),
        Node("p_wr2", "Player", {"name": "Rashad Greer", "position": "WR",
                                 "year": 4}),
        Node("p_rb", "Player", {"name": "Devon Cole", "position": "RB",
                                "year": 1}),
        Node("p_te", "Player", {"name": "Marcus Lane", "position": "TE",
                                "year": 2}),
        Node("p_k", "Player", {"name": "Aldo Ruiz", "position": "K",
                               "year": 3}),
        Node("p_qb2", "Player", {"name": "Cole Mercer", "position": "QB",
                                 "year": 2}),
        Node("p_wr3", "Player", {"name": "Trey Holt", "position": "WR",
                                 "year": 3}),
        Node("g1", "Game", {"week": 1}),
        Node("g2", "Game", {"week": 2}),
        Node("g3", "Game", {"week": 3}),
        Node("ts1", "TeamGameStats", {"team": "Ohio State",
                                      "outcome": "WIN", "points": 31}),
        Node("ts2", "TeamGameStats", {"team": "Indiana",
                                      "outcome": "LOSS", "points": 17}),
        Node("ts3", "TeamGameStats", {"team": "Ohio State",
                                      "outcome": "WIN", "points": 28}),
        Node("ts4", "TeamGameStats", {"team": "Purdue",
                                      "outcome": "LOSS", "points": 10}),
        Node("ts5", "TeamGameStats", {"team": "Florida State",
                                      "outcome": "WIN", "points": 24}),
        Node("ts6", "TeamGameStats", {"team": "Purdue",
                                      "outcome": "LOSS", "points": 21}),
    ]
    fsu_roster = ["p_qb", "p_wr1", "p_wr2", "p_rb", "p_te", "p_k"]
    edges = [
        Edge("hs1", "homeStadium", "t_fsu", "s_doak"),
        Edge("hs2", "homeStadium", "t_osu", "s_shoe"),
    ]
    edges += [Edge(f"pf{i}", "playsFor", pid, "t_fsu")
              for i, pid in enumerate(fsu_roster, start=1)]
    edges += [
        Edge("pf7", "playsFor", "p_qb2", "t_osu"),
        Edge("pf8", "playsFor", "p_wr3", "t_osu"),
    ]
    played = [("t_osu", "g1"), ("t_ind", "g1"), ("t_osu", "g2"),
              ("t_pur", "g2"), ("t_fsu", "g3"), ("t_pur", "g3")]
    edges += [Edge(f"pi{i}", "playedIn", t, g, directed=False)
              for i, (t, g) in enumerate(played, start=1)]
    edges += [
        Edge("w1", "wonBy", "g1", "t_osu"),
        Edge("w2", "wonBy", "g2", "t_osu"),
        Edge("w3", "wonBy", "g3", "t_fsu"),
        Edge("l1", "lostBy", "g1", "t_ind"),
        Edge("l2", "lostBy", "g2", "t_pur"),
        Edge("l3", "lostBy", "g3", "t_pur"),
    ]
    stats = [("t_osu", "ts1", "g1"), ("t_ind", "ts2", "g1"),
             ("t_osu", "ts3", "g2"), ("t_pur", "ts4", "g2"),
             ("t_fsu", "ts5", "g3"), ("t_pur", "ts6", "g3")]
    for i, (team, ts, game) in enumerate(stats, start=1):
        edges.append(Edge(f"st{i}", "hasStats", team, ts))
        edges.append(Edge(f"so{i}", "statsOf", ts, game))
    return PropertyGraph(nodes, edges)


def movie_graph() -> PropertyGraph:
    nodes = [
        Node("a1", "Actor", {"name": "Noah Pryce"}),
        Node("a2", "Actor", {"name": "Lena Voss"}),
        Node("a3", "Actor", {"name": "Omar Diaz"}),
        Node("m1", "Movie", {"title": "Glass Harbor"}),
        Node("m2", "Movie", {"title": "Night Cartographer"}),
        Node("m3", "Movie", {"title": "The Long Meridian"}),
        Node("d1", "Director", {"name": "Iris Kohl", "age": 45}),
        Node("d2", "Director", {"name": "Pavel Mirov", "age": 35}),
    ]
    edges = [
        Edge("c1", "actedIn", "a1", "m1"),
        Edge("c2", "actedIn", "a2", "m1"),
        Edge("c3", "actedIn", "a2", "m2"),
        Edge("c4", "actedIn", "a3", "m2"),
        Edge("c5", "actedIn", "a1", "m3"),
        Edge("d1e", "directedBy", "m1", "d1"),
        Edge("d2e", "directedBy", "m2", "d2"),
        Edge("d3e", "directedBy", "m3", "d1"),
    ]
    return PropertyGraph(nodes, edges)


def referral_graph() -> PropertyGraph:
    """Two treatments, two patients, two insurers, disjoint 2-hop paths."""
    nodes = [
        Node("T1", "Treatment", {"name": "T1"}),
        Node("T2", "Treatment", {"name": "T2"}),
        Node("Pa", "Patient", {"name": "Pa"}),
        Node("Pb", "Patient", {"name": "Pb"}),
        Node("I1", "Insurer", {"name": "I1"}),
        Node("I2", "Insurer", {"name": "I2"}),
    ]
    edges = [
        Edge("e1", "prescribed", "T1", "Pa"),
        Edge("e2", "prescribed", "T2", "Pb"),
        Edge("e3", "insuredBy", "Pa", "I1"),
        Edge("e4", "insuredBy", "Pb", "I2"),
    ]
    return PropertyGraph(nodes, edges)


def referral_graph_wide() -> PropertyGraph:
    """Eight treatments; T1 reaches I1 through two patients (a diamond)."""
    nodes = [Node(f"T{i}", "Treatment", {"name": f"T{i}"}) for i in range(1, 9)]
    nodes += [Node(f"P{i}", "Patient", {"name": f"P{i}"}) for i in range(1, 6)]
    nodes += [Node(f"I{i}", "Insurer", {"name": f"I{i}"}) for i in range(1, 4)]
    prescribed = [("T1", "P1"), ("T1", "P2"), ("T2", "P1"), ("T3", "P2"),
                  ("T4", "P2"), ("T5", "P3"), ("T6", "P4"), ("T7", "P5"),
                  ("T8", "P5")]
    insured = [("P1", "I1"), ("P2", "I1"), ("P3", "I2"), ("P4", "I2"),
               ("P5", "I3")]
    edges = [Edge(f"rx{i}", "prescribed", s, t)
             for i, (s, t) in enumerate(prescribed, start=1)]
    edges += [Edge(f"in{i}", "insuredBy", s, t)
              for i, (s, t) in enumerate(insured, start=1)]
    return PropertyGraph(nodes, edges)


def campus_graph_small() -> PropertyGraph:
    nodes = [
        Node("S1", "Student", {"name": "S1", "country": "US"}),
        Node("S2", "Student", {"name": "S2", "country": "FR"}),
        Node("P1", "Professor", {"name": "P1", "country": "US"}),
    ]
    return PropertyGraph(nodes, [])


def campus_graph() -> PropertyGraph:
    """Six students (one without a country), three professors."""
    nodes = [
        Node("S1", "Student", {"name": "S1", "country": "US"}),
        Node("S2", "Student", {"name": "S2", "country": "FR"}),
        Node("S3", "Student", {"name": "S3", "country": "US"}),
        Node("S4", "Student", {"name": "S4", "country": "DE"}),
        Node("S5", "Student", {"name": "S5", "country": "FR"}),
        Node("S6", "Student", {"name": "S6"}),
        Node("P1", "Professor", {"name": "P1", "country": "US"}),
        Node("P2", "Professor", {"name": "P2", "country": "DE"}),
        Node("P3", "Professor", {"name": "P3", "country": "JP"}),
    ]
    edges = [
        Edge("a1", "advisedBy", "S1", "P1"),
        Edge("a2", "advisedBy", "S2", "P1"),
        Edge("a3", "advisedBy", "S3", "P2"),
        Edge("a4", "advisedBy", "S4", "P2"),
        Edge("a5", "advisedBy", "S5", "P3"),
        Edge("a6", "advisedBy", "S6", "P3"),
    ]
    return PropertyGraph(nodes, edges)


ALL_FIXTURES = {
    "clinic": clinic_graph,
    "insurance": insurance_graph,
    "football": football_graph,
    "movie": movie_graph,
    "referral": referral_graph,
    "referral_wide": referral_graph_wide,
    "campus": campus_graph,
}


# ---- documents ----

CLINIC_JSON = """\
{
  "nodes": [
    {"id": "alice", "class": "Doctor", "attrs": {"name": "Alice"}},
    {"id": "dave", "class": "Doctor", "attrs": {"name": "Dave"}},
    {"id": "eve", "class": "Doctor", "attrs": {"name": "Eve"}},
    {"id": "bob", "class": "Patient", "attrs": {"name": "Bob", "sex": "male"}},
    {"id": "carol", "class": "Patient", "attrs": {"name": "Carol", "sex": "female"}}
  ],
  "edges": [
    {"id": "t1", "class": "treats", "source": "alice", "target": "bob"},
    {"id": "t2", "class": "treats", "source": "alice", "target": "carol"},
    {"id": "t3", "class": "treats", "source": "dave", "target": "bob"},
    {"id": "t4", "class": "treats", "source": "eve", "target": "carol"}
  ]
}
"""

FRIENDSHIP_JSON = """\
{
  "nodes": [
    {"id": "u1", "class": "Person", "attrs": {"name": "Ana"}},
    {"id": "u2", "class": "Person", "attrs": {"name": "Ben"}}
  ],
  "edges": [
    {"id": "f1", "class": "Friendship", "source": "u1", "target": "u2",
     "directed": false, "attrs": {"since": 2010}}
  ]
}
"""


# ---- oracles ----

def oracle_neighbors(g: PropertyGraph, seeds, target_class, edge_class=None,
                     direction="any") -> set[str]:
    """Per-edge enumeration; undirected edges satisfy every direction."""
    out = set()
    for e in g.edges.values():
        if edge_class is not None and e.cls != edge_class:
            continue
        pairs = []
        if e.directed:
            if direction in ("any", "outgoing"):
                pairs.append((e.source, e.target))
            if direction in ("any", "incoming"):
                pairs.append((e.target, e.source))
        else:
            pairs.append((e.source, e.target))
            pairs.append((e.target, e.source))
        for frm, to in pairs:
            if frm in seeds and g.nodes[to].cls == target_class:
                out.add(to)
    return out


def oracle_compose(g: PropertyGraph, seeds, class_path) -> set[str]:
    """Repeated fan-out through a class sequence."""
    current = set(seeds)
    for cls in class_path:
        current = oracle_neighbors(g, current, cls)
    return current


def oracle_attribute_join(g: PropertyGraph, seeds, other_class, key) -> set[str]:
    from pivotladder.values import values_equal
    seed_values = [g.nodes[s].attrs[key] for s in seeds
                   if key in g.nodes[s].attrs]
    out = set()
    for n in g.nodes.values():
        if n.cls != other_class or key not in n.attrs:
            continue
        if any(values_equal(n.attrs[key], v) for v in seed_values):
            out.add(n.id)
    return out


# ---- random generators ----

NODE_CLASSES = ("Alpha", "Beta", "Gamma", "Delta", "Epsilon")
EDGE_CLASSES = ("links", "follows", "owns")
TAGS = ("red", "green", "blue")


def random_graph(rng: random.Random, max_nodes=200, max_edges=800,
                 max_classes=5) -> PropertyGraph:
    n_classes = rng.randint(1, max_classes)
    classes = NODE_CLASSES[:n_classes]
    n_nodes = rng.randint(n_classes, max_nodes)
    nodes = []
    for i in range(n_nodes):
        # the first n_classes nodes guarantee every class is populated
        cls = classes[i] if i < n_classes else rng.choice(classes)
        attrs = {}
        if rng.random() < 0.8:
            attrs["score"] = rng.randint(0, 5)
        if rng.random() < 0.5:
            attrs["tag"] = rng.choice(TAGS)
        if rng.random() < 0.15:
            attrs["ratio"] = round(rng.random() * 10, 2)
        nodes.append(Node(f"n{i}", cls, attrs))
    n_edges = rng.randint(0, max_edges)
    edges = []
    for j in range(n_edges):
        edges.append(Edge(
            f"e{j}",
            rng.choice(EDGE_CLASSES),
            f"n{rng.randrange(n_nodes)}",
            f"n{rng.randrange(n_nodes)}",
            directed=rng.random() < 0.7,
        ))
    return PropertyGraph(nodes, edges)


def random_predicate(rng: random.Random) -> dict:
    roll = rng.random()
    if roll < 0.45:
        return {"kind": "attribute", "key": "score",
                "op": rng.choice(("==", "!=", "<", "<=", ">", ">=")),
                "literal": rng.randint(0, 5)}
    if roll < 0.75:
        return {"kind": "attribute", "key": "tag", "op": rng.choice(("==", "!=")),
                "literal": rng.choice(TAGS)}
    return {"kind": "degree", "direction": rng.choice(("any", "incoming", "outgoing")),
            "op": rng.choice((">=", "<=", ">", "<", "==")),
            "threshold": rng.randint(0, 3)}


def graph_classes(g: PropertyGraph) -> list[str]:
    return sorted({n.cls for n in g.nodes.values()})


# -- script generation ---------------------------------------------------------

SCRIPT_NAMES = (
    "Team", "Player", "score", "tag", "Team-Game Statistics", "select",
    "9lives", "café", "outcome_code", "x",
)
SCRIPT_STRINGS = (
    "plain", 'say "hi"', "tab\there", "line\nbreak", "back\\slash",
    "café au lait", "",
)


def _random_pred_ast(rng: random.Random):
    from pivotladder.dsl import AttrPred, DegreePred, Span
    span = Span(1, 1)
    if rng.random() < 0.25:
        return DegreePred(rng.choice(("any", "incoming", "outgoing")),
                          rng.choice(("==", "!=", "<", "<=", ">", ">=")),
                          rng.randint(0, 9), span)
    key = rng.choice(SCRIPT_NAMES)
    op = rng.choice(("==", "!=", "<", "<=", ">", ">=", "contains", "in"))
    def literal():
        roll = rng.random()
        if roll < 0.35:
            return rng.choice(SCRIPT_STRINGS)
        if roll < 0.6:
            return rng.randint(-1000, 1000)
        if roll < 0.8:
            return round(rng.uniform(-100.0, 100.0), 3)
        return rng.random() < 0.5
    if op == "in":
        return AttrPred(key, op, tuple(literal() for _ in range(rng.randint(1, 3))), span)
    if op == "contains":
        return AttrPred(key, op, rng.choice(SCRIPT_STRINGS), span)
    return AttrPred(key, op, literal(), span)


def random_script(rng: random.Random):
    """A structurally valid script exercising every statement form."""
    from pivotladder import dsl
    span = dsl.Span(1, 1)
    stmts = []
    if rng.random() < 0.5:
        fmt = rng.choice((None, "json-nodelink", "graphml-subset"))
        stmts.append(dsl.Load(rng.choice(("g.json", "data/g.graphml")), fmt, span))
    preds = lambda: tuple(_random_pred_ast(rng) for _ in range(rng.randint(1, 3)))
    makers = (
        lambda: dsl.Select(rng.choice(SCRIPT_NAMES),
                           preds() if rng.random() < 0.5 else (), span),
        lambda: dsl.Pivot(rng.choice(SCRIPT_NAMES),
                          rng.choice((None, "links", "team stats")),
                          rng.choice((None, "fanin", "fanout", "intersect",
                                      "smart", "scope")), span),
        lambda: dsl.Filter(preds(), span),
        lambda: dsl.Group(rng.choice(SCRIPT_NAMES),
                          rng.choice((None, "asc", "desc")),
                          rng.choice((None, rng.randint(1, 12))), span),
        lambda: dsl.Bins(tuple(rng.choice(SCRIPT_STRINGS)
                               for _ in range(rng.randint(1, 3))), span),
        lambda: dsl.Snip(rng.randint(0, 9), span),
        lambda: dsl.Scope(rng.random() < 0.5, span),
        lambda: dsl.Undo(span),
        lambda: dsl.Clear(span),
        lambda: dsl.Describe(span),
        lambda: dsl.Export(rng.choice(("out.json", "out.graphml")),
                           rng.choice((None, "json-nodelink")), span),
        lambda: dsl.AdaptReport(span),
        lambda: dsl.AdaptApply(rng.randint(1, 5), span),
    )
    for _ in range(rng.randint(1, 12)):
        stmts.append(rng.choice(makers)())
    return dsl.Script(tuple(stmts))
