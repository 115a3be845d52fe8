import pytest

from pivotladder.errors import FilterKindError, UnknownLabelError
from pivotladder.filters import (
    build_histogram,
    compute_bin_members,
    evaluate_filter,
    filter_label,
    make_attribute_filter,
    make_bins_filter,
    make_degree_filter,
    require_labels,
)
from pivotladder.graph import Edge, Node, PropertyGraph


def flat(nodes, edges=()):
    return PropertyGraph(nodes, list(edges))


def test_attribute_filter_equality(clinic):
    spec = make_attribute_filter(1, 0, "sex", "==", "female")
    got = evaluate_filter(clinic, spec, {"bob", "carol"}, set())
    assert got == {"carol"}


def test_attribute_filter_missing_key_semantics(clinic):
    # doctors have no sex attribute: every comparison false except !=
    eq = make_attribute_filter(1, 0, "sex", "==", "female")
    ne = make_attribute_filter(2, 0, "sex", "!=", "female")
    doctors = {"alice", "dave", "eve"}
    assert evaluate_filter(clinic, eq, doctors, set()) == set()
    assert evaluate_filter(clinic, ne, doctors, set()) == doctors


def test_attribute_filter_cross_kind_never_matches():
    g = flat([Node("a", "A", {"x": 3}), Node("b", "A", {"x": 3.0}),
              Node("c", "A", {"x": "3"})])
    spec = make_attribute_filter(1, 0, "x", "==", 3)
    assert evaluate_filter(g, spec, {"a", "b", "c"}, set()) == {"a"}
    ne = make_attribute_filter(2, 0, "x", "!=", 3)
    assert evaluate_filter(g, ne, {"a", "b", "c"}, set()) == {"b", "c"}


def test_ordering_filter_requires_numeric_literal():
    with pytest.raises(FilterKindError):
        make_attribute_filter(1, 0, "name", "<", "M")
    make_attribute_filter(1, 0, "age", "<", 40)      # fine
    make_attribute_filter(2, 0, "ratio", ">=", 1.5)  # fine


def test_ordering_filter_skips_mismatched_kinds():
    g = flat([Node("a", "A", {"x": 2}), Node("b", "A", {"x": 2.5}),
              Node("c", "A", {"x": "zz"})])
    spec = make_attribute_filter(1, 0, "x", "<", 3)
    # only the integer-kinded value orders against the integer literal
    assert evaluate_filter(g, spec, {"a", "b", "c"}, set()) == {"a"}


def test_contains_filter():
    g = flat([Node("a", "A", {"name": "Florida State"}),
              Node("b", "A", {"name": "Ohio State"}),
              Node("c", "A", {"name": "Navy"})])
    spec = make_attribute_filter(1, 0, "name", "contains", "State")
    assert evaluate_filter(g, spec, {"a", "b", "c"}, set()) == {"a", "b"}
    with pytest.raises(FilterKindError):
        make_attribute_filter(2, 0, "name", "contains", 3)


def test_in_filter():
    g = flat([Node("a", "A", {"pos": "QB"}), Node("b", "A", {"pos": "WR"}),
              Node("c", "A", {"pos": "K"})])
    spec = make_attribute_filter(1, 0, "pos", "in", ["QB", "WR"])
    assert evaluate_filter(g, spec, {"a", "b", "c"}, set()) == {"a", "b"}


def test_degree_filter_counts_witnessed_edges():
    nodes = [Node("s", "S"), Node("x", "T"), Node("y", "T")]
    edges = [Edge("e1", "r", "s", "x"), Edge("e2", "r", "s", "x"),
             Edge("e3", "r", "y", "s"),
             Edge("e4", "u", "s", "y", directed=False)]
    g = flat(nodes, edges)
    witnesses = {"e1", "e2", "e3", "e4"}
    deg_any = make_degree_filter(1, 0, "any", ">=", 2)
    assert evaluate_filter(g, deg_any, {"x", "y"}, witnesses) == {"x", "y"}
    deg_in = make_degree_filter(2, 0, "incoming", ">=", 2)
    # x has two incoming, y has one undirected (counts for every direction)
    assert evaluate_filter(g, deg_in, {"x", "y"}, witnesses) == {"x"}
    deg_out = make_degree_filter(3, 0, "outgoing", ">=", 1)
    assert evaluate_filter(g, deg_out, {"x", "y"}, witnesses) == {"y"}


def test_degree_filter_self_loop_counts_once():
    g = flat([Node("a", "A")], [Edge("e", "r", "a", "a")])
    spec = make_degree_filter(1, 0, "any", "==", 1)
    assert evaluate_filter(g, spec, {"a"}, {"e"}) == {"a"}


def test_degree_filter_zero_threshold_keeps_isolated():
    g = flat([Node("a", "A"), Node("b", "A")])
    spec = make_degree_filter(1, 0, "any", "==", 0)
    assert evaluate_filter(g, spec, {"a", "b"}, set()) == {"a", "b"}


def test_filter_labels():
    assert filter_label(make_attribute_filter(1, 0, "name", "==", "Alice")) == \
        'name == "Alice"'
    assert filter_label(make_degree_filter(2, 0, "any", ">=", 2)) == \
        "degree any >= 2"
    spec = make_bins_filter(3, 1, "position", ("categorical",), ["QB"])
    assert "position" in filter_label(spec) and "QB" in filter_label(spec)


def test_histogram_categorical(football):
    players = football.nodes_of_class("Player")
    view = build_histogram(football, players, "position")
    labels = [b.label for b in view.bins]
    assert labels == sorted(labels)
    counts = {b.label: b.count for b in view.bins}
    assert counts == {"K": 1, "QB": 2, "RB": 1, "TE": 1, "WR": 3}
    assert sum(b.count for b in view.bins) == len(players)


def test_histogram_count_sort(football):
    players = football.nodes_of_class("Player")
    view = build_histogram(football, players, "position", sort=("count", "desc"))
    counts = [b.count for b in view.bins]
    assert counts == sorted(counts, reverse=True)
    assert view.bins[0].label == "WR"


def test_histogram_missing_values_bin_last():
    g = flat([Node("a", "A", {"x": 1}), Node("b", "A")])
    view = build_histogram(g, {"a", "b"}, "x")
    assert view.bins[-1].label == "∅"
    assert view.bins[-1].count == 1


def test_histogram_label_collision_across_kinds():
    g = flat([Node("a", "A", {"x": 1}), Node("b", "A", {"x": "1"}),
              Node("c", "A", {"x": True})])
    view = build_histogram(g, {"a", "b", "c"}, "x")
    labels = {b.label for b in view.bins}
    # colliding plain labels get their kind appended
    assert any("(integer)" in l for l in labels)
    assert any("(text)" in l for l in labels)
    assert sum(b.count for b in view.bins) == 3


def test_histogram_equal_width():
    g = flat([Node(f"n{i}", "A", {"v": float(i)}) for i in range(10)]
             + [Node("m", "A", {"v": "oops"})])
    view = build_histogram(g, {f"n{i}" for i in range(10)} | {"m"}, "v",
                           binning=("equal-width", 3))
    assert len(view.bins) == 4  # 3 intervals + missing
    assert view.bins[-1].label == "∅" and view.bins[-1].count == 1
    assert sum(b.count for b in view.bins) == 11
    members = compute_bin_members(g, {f"n{i}" for i in range(10)} | {"m"},
                                  "v", ("equal-width", 3))
    sizes = [len(m) for _, m in members]
    assert sum(sizes) == 11


def test_histogram_equal_width_degenerate_range():
    g = flat([Node("a", "A", {"v": 2}), Node("b", "A", {"v": 2})])
    view = build_histogram(g, {"a", "b"}, "v", binning=("equal-width", 5))
    assert len(view.bins) == 1
    assert view.bins[0].count == 2


def test_histogram_empty_set_zero_bins():
    g = flat([Node("a", "A", {"v": 1})])
    view = build_histogram(g, set(), "v")
    assert view.bins == ()or view.bins == []


def test_require_labels_unknown(football):
    players = football.nodes_of_class("Player")
    view = build_histogram(football, players, "position")
    require_labels(view, ["QB"])
    with pytest.raises(UnknownLabelError):
        require_labels(view, ["GOALIE"])


def test_bins_filter_recomputes_membership(football):
    players = football.nodes_of_class("Player")
    spec = make_bins_filter(1, 1, "position", ("categorical",), ["WR"])
    got = evaluate_filter(football, spec, players, set())
    assert got == {"p_wr1", "p_wr2", "p_wr3"}
