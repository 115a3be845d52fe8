import random

import pytest

import helpers
from pivotladder import dsl
from pivotladder.adaptive import UsageLog
from pivotladder.engine import begin_session
from pivotladder.errors import DslParseError, DslRuntimeError


ROSTER_SCRIPT = (
    'select Team where name == "Florida State"; pivot Player; '
    'group by position; filter position == "QB";'
)


# ---- lexer ----

def test_tokenize_basics():
    toks = dsl.tokenize('pivot Player mode fanout;')
    assert [(t.type, t.value) for t in toks] == [
        ("KW", "pivot"), ("NAME", "Player"), ("KW", "mode"), ("KW", "fanout"),
        ("PUNCT", ";"), ("EOF", None)]


def test_tokenize_spans_and_strings():
    toks = dsl.tokenize('filter name == "a \\"b\\""\n  and age >= 2.5;')
    string = next(t for t in toks if t.type == "STRING")
    assert string.value == 'a "b"'
    assert (string.line, string.col) == (1, 16)
    age = next(t for t in toks if t.value == "age")
    assert (age.line, age.col) == (2, 7)
    assert any(t.type == "REAL" and t.value == 2.5 for t in toks)


def test_tokenize_comments_skipped():
    toks = dsl.tokenize("undo; # the rest is ignored ;;;\nclear;")
    words = [t.value for t in toks if t.type == "KW"]
    assert words == ["undo", "clear"]


def test_tokenize_unterminated_string():
    with pytest.raises(DslParseError) as err:
        dsl.tokenize('select "Tea')
    assert (err.value.line, err.value.column) == (1, 8)


def test_tokenize_unexpected_character():
    with pytest.raises(DslParseError) as err:
        dsl.tokenize("select @Team;")
    assert (err.value.line, err.value.column) == (1, 8)


def test_keywords_case_insensitive():
    script = dsl.parse("PIVOT Patient MODE FanOut;")
    stmt = script.statements[0]
    assert stmt.mode == "fanout"
    assert dsl.format_statement(stmt) == "pivot Patient mode fanout;"


# ---- parser ----

def test_parse_empty_input():
    assert dsl.parse("") == dsl.Script(())
    assert dsl.parse("  # just a comment\n") == dsl.Script(())


def test_parse_four_statement_flow():
    script = dsl.parse(ROSTER_SCRIPT)
    kinds = [type(s).__name__ for s in script.statements]
    assert kinds == ["Select", "Pivot", "Group", "Filter"]
    sel = script.statements[0]
    assert sel.cls == "Team"
    assert sel.predicates[0].literal == "Florida State"


def test_parse_missing_class_name():
    with pytest.raises(DslParseError) as err:
        dsl.parse("pivot;")
    assert (err.value.line, err.value.column) == (1, 6)
    assert "class name" in err.value.message


def test_parse_error_locations():
    cases = [
        ("select Team where;", 1, 18),          # predicate expected
        ("group position;", 1, 7),              # missing `by`
        ("pivot Team mode sideways;", 1, 17),   # unknown mode word
        ("snip two;", 1, 6),                    # id must be an integer
        ("scope maybe;", 1, 7),                 # on/off only
        ("select Team\nwhere tag in 1, 2;", 2, 14),  # `in` needs parentheses
        ("undo", 1, 5),                         # missing terminator
    ]
    for text, line, col in cases:
        with pytest.raises(DslParseError) as err:
            dsl.parse(text)
        assert (err.value.line, err.value.column) == (line, col), text


def test_parse_duplicate_load():
    with pytest.raises(DslParseError) as err:
        dsl.parse('load "a.json";\nload "b.json";')
    assert (err.value.line, err.value.column) == (2, 1)


def test_parse_quoted_names_and_compound_predicates():
    script = dsl.parse(
        'select "Team-Game Statistics" where outcome == "WIN" and points > 20;')
    sel = script.statements[0]
    assert sel.cls == "Team-Game Statistics"
    assert [p.op for p in sel.predicates] == ["==", ">"]
    assert sel.predicates[1].literal == 20


def test_parse_degree_and_membership_predicates():
    script = dsl.parse('filter degree out >= 2 and tag in ("a", "b") '
                       "and flag == true;")
    d, m, b = script.statements[0].predicates
    assert (d.direction, d.op, d.threshold) == ("outgoing", ">=", 2)
    assert m.literal == ("a", "b")
    assert b.literal is True


def test_spans_ignored_by_equality():
    a = dsl.parse("pivot Team;")
    b = dsl.parse("\n\n   pivot    Team ;")
    assert a == b
    assert a.statements[0].span.line == 1
    assert b.statements[0].span.line == 3


# ---- formatter ----

def test_format_canonicalizes():
    text = ('LOAD "g.json" FORMAT "json-nodelink";select   Team   where '
            'name=="x";pivot Player via playsFor mode SCOPE;')
    expect = ('load "g.json" format "json-nodelink";\n'
              'select Team where name == "x";\n'
              'pivot Player via playsFor mode scope;\n')
    assert dsl.format_script(dsl.parse(text)) == expect


def test_format_quotes_only_when_needed():
    script = dsl.parse('select "Team" where "select" == "a\\nb";')
    assert dsl.format_script(script) == 'select Team where "select" == "a\\nb";\n'


def test_format_empty_script():
    assert dsl.format_script(dsl.Script(())) == ""


def test_roundtrip_generated_corpus():
    rng = random.Random(1311)
    for _ in range(60):
        script = helpers.random_script(rng)
        text = dsl.format_script(script)
        again = dsl.parse(text)
        assert again == script
        assert dsl.format_script(again) == text


# ---- interpreter ----

def test_filtered_fanback_reaches_foreign_patient(insurance):
    interp = dsl.Interpreter(insurance)
    interp.run_text(
        'select Doctor where name == "D1";'
        "pivot Patient; pivot Insurer;"
        'filter name == "I1";'
        "pivot Patient mode fanout;")
    assert interp.session.steps[-1].active_set == {"Pa", "Pc"}


def test_roster_position_script(football):
    interp = dsl.Interpreter(football)
    interp.run_text(ROSTER_SCRIPT)
    assert interp.session.steps[-1].active_set == {"p_qb"}


def test_scope_off_pivot_back_script(football):
    interp = dsl.Interpreter(football)
    interp.run_text(
        'select Team where name == "Ohio State";'
        "pivot TeamGameStats;"
        'filter outcome == "WIN";'
        "pivot Game;"
        "scope off;"
        "pivot Team via lostBy mode fanout;")
    assert interp.session.steps[-1].active_set == {"t_ind", "t_pur"}


def test_script_equals_direct_engine_calls(football):
    interp = dsl.Interpreter(football)
    interp.run_text('select Player; filter year >= 3; group by position;'
                    'bins "QB"; scope off; scope on;')
    direct = begin_session(football)
    direct.select("Player")
    direct.apply_filter({"kind": "attribute", "key": "year", "op": ">=",
                         "literal": 3})
    direct.group_by("position", ("label", "asc"), ("categorical",))
    direct.select_bins(["QB"])
    direct.set_global_scope(False)
    direct.set_global_scope(True)
    assert interp.session.to_json() == direct.to_json()


def test_runtime_error_carries_statement_span(clinic):
    interp = dsl.Interpreter(clinic)
    with pytest.raises(DslRuntimeError) as err:
        interp.run_text("select Doctor;\n  pivot Nurse;")
    assert (err.value.line, err.value.column) == (2, 3)
    assert err.value.code == "unknown_class"
    # the failed statement left no trace
    assert len(interp.session.steps) == 1


def test_ops_require_a_graph():
    interp = dsl.Interpreter()
    with pytest.raises(DslRuntimeError) as err:
        interp.run_text("select Doctor;")
    assert err.value.code == "bad_operation"


def test_load_must_come_first(clinic, tmp_path):
    (tmp_path / "g.json").write_text(helpers.CLINIC_JSON)
    interp = dsl.Interpreter(clinic, base_dir=str(tmp_path))
    interp.run_text("select Doctor;")
    with pytest.raises(DslRuntimeError) as err:
        interp.run_text('load "g.json";')
    assert err.value.code == "bad_operation"


def test_load_and_describe_outputs(tmp_path):
    (tmp_path / "g.json").write_text(helpers.CLINIC_JSON)
    interp = dsl.Interpreter(base_dir=str(tmp_path))
    outputs = interp.run_text('load "g.json"; select Patient; describe;')
    assert outputs[0]["kind"] == "load"
    assert outputs[0]["format"] == "json-nodelink"
    assert (outputs[0]["nodes"], outputs[0]["edges"]) == (5, 4)
    assert outputs[1]["kind"] == "describe"
    assert outputs[1]["chain"][0]["category"] == "Patient"
    assert outputs[1]["chain"][0]["size"] == 2


def test_export_statement_writes_file(insurance, tmp_path):
    interp = dsl.Interpreter(insurance, base_dir=str(tmp_path))
    outputs = interp.run_text(
        'select Doctor where name == "D1"; pivot Patient;'
        'export "slice.graphml";')
    out = outputs[-1]
    assert (out["kind"], out["format"]) == ("export", "graphml-subset")
    assert (out["nodes"], out["edges"]) == (3, 2)
    from pivotladder.formats import load_graph
    sub = load_graph((tmp_path / "slice.graphml").read_text(), "graphml-subset")
    assert set(sub.nodes) == {"D1", "Pa", "Pb"}


def test_adapt_report_and_apply(referral):
    log = UsageLog()
    for i in range(3):
        s = begin_session(referral)
        s.select("Treatment")
        s.pivot("Patient")
        s.pivot("Insurer")
        s.apply_filter({"kind": "attribute", "key": "name", "op": "==",
                        "literal": "I1"})
        s.pivot("Patient")
        s.pivot("Treatment")
        log.record_chain(s, f"u{i}")
    interp = dsl.Interpreter(referral, usage_log=log)
    outputs = interp.run_text("adapt report; adapt apply 1;")
    report, applied = outputs
    assert report["kind"] == "adapt-report"
    assert report["proposals"][0]["rewrite"] == "DeriveEdges"
    assert applied["kind"] == "adapt-apply"
    assert applied["graphVersion"] == referral.version + 1
    assert interp.graph.version == referral.version + 1
    # a fresh, untouched session follows the graph forward immediately
    assert interp.session.graph.version == interp.graph.version


def test_adapt_apply_without_report(referral):
    interp = dsl.Interpreter(referral)
    with pytest.raises(DslRuntimeError) as err:
        interp.run_text("adapt apply 1;")
    assert err.value.code == "bad_adaptation"


def test_adapt_apply_index_out_of_range(referral):
    interp = dsl.Interpreter(referral)
    interp.run_text("adapt report;")
    with pytest.raises(DslRuntimeError):
        interp.run_text("adapt apply 1;")


def test_clear_repins_evolved_graph(referral):
    log = UsageLog()
    for i in range(3):
        s = begin_session(referral)
        s.select("Treatment")
        s.pivot("Patient")
        s.pivot("Insurer")
        s.pivot("Patient")
        s.pivot("Treatment")
        log.record_chain(s, f"u{i}")
    interp = dsl.Interpreter(referral, usage_log=log)
    interp.run_text("select Treatment; adapt report; adapt apply 1;")
    # mid-chain the session stays pinned to the old snapshot
    assert interp.session.graph.version == referral.version
    assert interp.graph.version == referral.version + 1
    interp.run_text("clear;")
    assert interp.session.graph.version == referral.version + 1
    assert interp.session.steps == []


def test_run_script_records_final_chain(referral):
    log = UsageLog()
    dsl.run_script("select Treatment; pivot Patient; pivot Insurer;"
                   "pivot Patient; pivot Treatment;",
                   graph=referral, usage_log=log, session_id="one")
    assert len(log.entries) == 1
    assert log.entries[0].signature[0] == "connection"
    assert log.entries[0].session_id == "one"


def test_clear_records_chain_too(referral):
    log = UsageLog()
    interp = dsl.Interpreter(referral, usage_log=log)
    interp.run_text("select Treatment; pivot Patient; pivot Insurer;"
                    "pivot Patient; pivot Treatment; clear;")
    interp.finish()
    assert len(log.entries) == 1


def test_guess_format():
    assert dsl.guess_format("a/b.graphml") == "graphml-subset"
    assert dsl.guess_format("A.XML") == "graphml-subset"
    assert dsl.guess_format("graph.json") == "json-nodelink"
    assert dsl.guess_format("noext") == "json-nodelink"
