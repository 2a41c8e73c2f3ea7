import json

import jsonschema
import pydot
import pytest

from tracereason import analyze, build_hierarchy, load_fixture, load_spec
from tracereason.report import RenderOptions, StaleResultError, render_explanations, render_report, report_schema
from tracereason.tracemodel import Location, RemoveTrace, TraceModel, TraceTuple, apply_edit


@pytest.fixture(scope="module")
def ecas_result(ecas_model, ecas_core, ecas_h):
    return analyze(ecas_model, ecas_core, ecas_h)


def dot_edges(text):
    (g,) = pydot.graph_from_dot_data(text)
    return g, [(e.get_source().strip('"'), e.get_destination().strip('"'), e.get_attributes()) for e in g.get_edges()]


def test_dot_conventions(ecas_result, ecas_model):
    text = render_report(ecas_result, ecas_model, RenderOptions("dot"))
    g, edges = dot_edges(text)
    assert len(g.get_nodes()) == 8  # 7 locations plus the default node statement
    assert len(edges) == 16
    r60_r59 = {a["label"].strip('"'): a for s, d, a in edges if (s, d) == ("r60", "r59")}
    assert r60_r59["conflicts"]["style"] == "dashed" and r60_r59["conflicts"]["color"] == "red"
    assert r60_r59["requires"]["style"] == "solid" and r60_r59["requires"]["color"] == "red"
    reds = [a for _, _, a in edges if a.get("color") == "red"]
    assert len(reds) == 2
    node = g.get_node('"i14"')[0]
    assert node.get("tooltip").strip('"') == "Code"


def test_dot_collapses_symmetric_pairs():
    core = load_spec("sig N { c: set N } fact { symmetric[c] }")
    h = build_hierarchy(core)
    model = TraceModel("S", (Location("a", "N"), Location("b", "N"), Location("c", "N")),
                       (TraceTuple("c", "a", "b"), TraceTuple("c", "b", "a"), TraceTuple("c", "b", "c")))
    text = render_report(analyze(model, core, h), model, RenderOptions("dot"))
    _, edges = dot_edges(text)
    both = [(s, d) for s, d, a in edges if a.get("dir") == "both"]
    # a<->b is assigned both ways; b->c assigned and c->b inferred differ in style
    assert both == [("a", "b")]
    assert len(edges) == 3


def test_json_schema(ecas_result, ecas_model):
    doc = json.loads(render_report(ecas_result, ecas_model, RenderOptions("json")))
    jsonschema.validate(doc, report_schema())
    assert list(doc) == ["stats", "assigned", "inferred", "violations", "diagnoses"]
    assert doc["stats"] == {"assigned": 7, "inferred": 9, "violations": 1}
    (v,) = doc["violations"]
    assert v["constraintId"] == "RequiresExcludesConflicts/excludes[requires,conflicts]#0"
    assert v["binding"] == {"a": "r60", "b": "r59"}
    assert len(doc["diagnoses"][0]["support"]) == 5
    conflicts = next(t for t in doc["inferred"] if (t["relation"], t["source"]) == ("conflicts", "r60"))
    assert conflicts["derivation"]["ruleId"].startswith("ConflictsPropagation/")


def test_json_empty(ecas_core, ecas_h):
    m = TraceModel("Empty")
    doc = json.loads(render_report(analyze(m, ecas_core, ecas_h), m, RenderOptions("json")))
    jsonschema.validate(doc, report_schema())
    doc.pop("stats")
    assert doc == {"assigned": [], "inferred": [], "violations": [], "diagnoses": []}


def test_text_derivation_chain(ecas_result, ecas_model):
    text = render_report(ecas_result, ecas_model, RenderOptions("text", include_derivations=True))
    lines = text.splitlines()
    start = next(i for i, l in enumerate(lines) if l.strip().startswith("conflicts(r60,r59) by"))
    depth = len(lines[start]) - len(lines[start].lstrip())
    chain = []
    for line in lines[start + 1:]:
        if len(line) - len(line.lstrip()) <= depth:
            break
        chain.append(line.strip())
    leaves = [c for c in chain if " by " not in c]
    assert leaves and all(c.endswith("[assigned]") for c in leaves)
    assert {c.split()[0] for c in leaves} <= {"refines(r60,r11)", "requires(r11,r97)", "contains(r97,r98)",
                                               "conflicts(r98,r59)"}


def test_text_sections(ecas_result, ecas_model):
    text = render_report(ecas_result, ecas_model)
    for header in ("assigned traces (7)", "inferred traces (9)", "violations (1)", "diagnoses (1)"):
        assert header in text
    assert "\x1b[" not in text
    assert "\x1b[31m" in render_report(ecas_result, ecas_model, RenderOptions(color=True))


def test_slice_view(ecas_result, ecas_model):
    doc = json.loads(render_report(ecas_result, ecas_model, RenderOptions("json", slice_location="i72")))
    jsonschema.validate(doc, report_schema())
    keys = {(t["relation"], t["source"], t["target"]) for t in doc["inferred"]}
    assert keys == {("satisfies", "i72", "r11"), ("satisfies", "i72", "r60")}
    assert doc["violations"] == []
    with pytest.raises(KeyError):
        render_report(ecas_result, ecas_model, RenderOptions(slice_location="zz"))


def test_stale_pair(ecas_result, ecas_model):
    fixed = apply_edit(ecas_model, RemoveTrace("requires", "r60", "r59"))
    with pytest.raises(StaleResultError):
        render_report(ecas_result, fixed)
    with pytest.raises(StaleResultError):
        render_report(ecas_result, TraceModel("Other", ecas_model.locations, ecas_model.tuples))


def test_bad_format(ecas_result, ecas_model):
    with pytest.raises(ValueError):
        render_report(ecas_result, ecas_model, RenderOptions("svg"))


@pytest.mark.parametrize("fmt", ["text", "json", "dot"])
def test_rendering_is_pure(ecas_result, ecas_model, fmt):
    opts = RenderOptions(fmt, include_derivations=True)
    assert render_report(ecas_result, ecas_model, opts) == render_report(ecas_result, ecas_model, opts)


def test_explanations(ecas_result):
    text = render_explanations(ecas_result)
    assert text.count("inconsistency:") == 1
    assert "requires(r60,r59)" in text


def test_axiom_fixture_reports(ecas_model):
    core = load_spec(load_fixture("ecas-axioms.tarski"))
    h = build_hierarchy(core)
    m = TraceModel("Ax", tuple(Location(f"q{i}", "Requirement", ecas_model.location("r11").payload) for i in range(3)),
                   (TraceTuple("requires", "q0", "q1"), TraceTuple("contains", "q1", "q2")))
    r = analyze(m, core, h)
    jsonschema.validate(json.loads(render_report(r, m, RenderOptions("json"))), report_schema())
    dot_edges(render_report(r, m, RenderOptions("dot")))
