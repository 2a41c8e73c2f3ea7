import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oracle import naive_closure, naive_violations
from tracereason import Analyzer, build_hierarchy, load_spec
from tracereason.dsl import ast, desugar, dnf, format_spec, parse_spec
from tracereason.dsl.core import Constraint, Rule
from tracereason.spans import DiagnosticsError
from tracereason.synthetic import random_case
from tracereason.tracemodel import (
    AddTrace,
    Location,
    Payload,
    RemoveTrace,
    RetypeLocation,
    TraceModel,
    TraceTuple,
    apply_edit,
    parse_model,
    parse_model_json,
    serialize_model,
)

VARS = st.sampled_from(["a", "b", "c", "x", "y2"])
NAMES = st.sampled_from(["Req", "Impl", "Art", "r", "s", "refines", "t_1"])
SIGS = st.sampled_from(["Req", "Impl", "Art"])

atoms = st.one_of(
    st.builds(ast.Membership, VARS, VARS, NAMES, st.booleans()),
    st.builds(ast.TypeTest, VARS, SIGS, st.booleans()),
)
exprs = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(lambda xs: ast.And(tuple(xs))),
        st.lists(inner, min_size=2, max_size=3).map(lambda xs: ast.Or(tuple(xs))),
    ),
    max_leaves=6,
)
head_atoms = st.one_of(
    st.builds(ast.Derive, VARS, VARS, NAMES),
    st.builds(ast.Forbid, VARS, VARS, NAMES),
    st.builds(ast.MustEqual, VARS, VARS),
    st.just(ast.Deny()),
)
heads = st.one_of(
    head_atoms,
    st.lists(head_atoms, min_size=2, max_size=3).map(lambda xs: ast.And(tuple(xs))),
    st.lists(head_atoms, min_size=2, max_size=3).map(lambda xs: ast.Or(tuple(xs))),
)
decls = st.builds(ast.VarDecl, st.lists(VARS, min_size=1, max_size=3).map(tuple), SIGS)
implications = st.builds(ast.Implication, st.lists(decls, min_size=1, max_size=2).map(tuple), exprs, heads,
                         st.sampled_from(["all", "some"]))
macros = st.sampled_from(sorted(ast.MACRO_ARITY)).flatmap(
    lambda k: st.lists(NAMES, min_size=ast.MACRO_ARITY[k], max_size=ast.MACRO_ARITY[k])
    .map(lambda rs: ast.Macro(k, tuple(rs))))
facts = st.builds(ast.FactDecl, st.one_of(st.none(), st.sampled_from(["F", "G1"])),
                  st.lists(st.one_of(implications, macros), min_size=1, max_size=3).map(tuple))


@st.composite
def sig_decls(draw):
    parent = draw(st.one_of(st.none(), SIGS))
    fields = draw(st.lists(st.sampled_from(["r", "s", "refines"]), unique=True, max_size=3))
    return ast.SigDecl(
        draw(SIGS), draw(st.booleans()), parent,
        draw(st.sampled_from(["extends", "in"])) if parent else None,
        tuple(ast.FieldDecl(f, draw(SIGS)) for f in fields),
        draw(st.one_of(st.none(), st.sampled_from(ast.LOCATION_KINDS))),
    )


specs = st.builds(ast.SpecAst, st.lists(sig_decls(), max_size=3).map(tuple), st.lists(facts, max_size=3).map(tuple))


@given(specs)
@settings(max_examples=150)
def test_print_parse_round_trip(tree):
    text = format_spec(tree)
    again = parse_spec(text)
    assert again == tree
    assert format_spec(again) == text


@given(st.lists(st.lists(st.sampled_from(["r", "s", "t"]), min_size=1, max_size=3), min_size=1, max_size=4))
def test_dnf_disjunct_count(disjuncts):
    spec = "sig A { r: set A, s: set A, t: set A }\nfact F { all a, b: A | "
    spec += " or ".join("(" + " and ".join(f"a->b in {r}" for r in conj) + ")" for conj in disjuncts)
    spec += " implies a->b in r }\n"
    core = load_spec(spec)
    assert len(core.rules) == len(disjuncts)
    for rule, conj in zip(core.rules, disjuncts):
        assert [a.relation for a in rule.body] == conj
        assert all(isinstance(a, (ast.Membership, ast.TypeTest)) for a in rule.body)


TOKENS = ["sig", "abstract", "fact", "all", "some", "A", "B", "r", "a", "b", "{", "}", "(", ")", "[", "]",
          ":", ",", "|", "->", "in", "not", "and", "or", "implies", "set", "extends", "none", "=", "@location",
          "text", "irreflexive", "excludes", "\n", "#", "\"", "/*"]


@given(st.lists(st.sampled_from(TOKENS), max_size=40))
@settings(max_examples=300)
def test_fuzzed_input_never_crashes(toks):
    text = " ".join(toks)
    lines = text.split("\n")
    try:
        core = desugar(parse_spec(text, "fuzz"))
    except DiagnosticsError as exc:
        assert exc.errors
        for e in exc.errors:
            assert 1 <= e.span.line <= len(lines)
            assert 1 <= e.span.column <= len(lines[e.span.line - 1]) + 1
        return
    for item in core.rules + core.constraints:
        assert isinstance(item, (Rule, Constraint))
        assert not any(getattr(a, "negated", False) for a in item.body)
        assert all(isinstance(a, (ast.Membership, ast.TypeTest)) for a in item.body)


def test_core_items_in_fixtures_are_clean():
    from tracereason import load_fixture
    for name in ("ecas.tarski", "ecas-axioms.tarski"):
        core = load_spec(load_fixture(name))
        for item in core.rules:
            assert isinstance(item.head, ast.Derive)
        for item in core.constraints:
            assert isinstance(item.head, (ast.Forbid, ast.MustEqual, ast.Deny))
        for item in core.rules + core.constraints:
            assert not any(getattr(a, "negated", False) for a in item.body)


@st.composite
def forests(draw):
    n = draw(st.integers(1, 8))
    parents = [None] + [draw(st.one_of(st.none(), st.integers(0, i - 1))) for i in range(1, n)]
    return "\n".join(f"sig S{i}" + (f" extends S{p}" if p is not None else "") + " {}" for i, p in enumerate(parents))


@given(forests())
def test_subtype_reflexive_transitive(text):
    h = build_hierarchy(load_spec(text))
    names = list(h.sigs)
    for a in names:
        assert h.is_subtype(a, a)
        for b in names:
            for c in names:
                if h.is_subtype(a, b) and h.is_subtype(b, c):
                    assert h.is_subtype(a, c)
            if a != b and h.is_subtype(a, b):
                assert not h.is_subtype(b, a)


ids = st.sampled_from(["l1", "l2", "l3", "x_9", "r60"])
payloads = st.builds(Payload, st.one_of(st.none(), st.text("ab/.\\\" é", max_size=6)),
                     st.one_of(st.none(), st.integers(0, 999)), st.one_of(st.none(), st.integers(0, 999)),
                     st.one_of(st.none(), st.text("xyz\"", max_size=4)))


@st.composite
def models(draw):
    locs = draw(st.lists(ids, unique=True, max_size=5))
    locations = tuple(Location(x, draw(st.sampled_from(["A", "B"])), draw(payloads)) for x in locs)
    tuples = ()
    if locs:
        keys = draw(st.lists(st.tuples(st.sampled_from(["r", "s"]), st.sampled_from(locs), st.sampled_from(locs)),
                             unique=True, max_size=8))
        tuples = tuple(TraceTuple(*k, draw(st.sampled_from(["assigned", "inferred", "accepted"]))) for k in keys)
    return TraceModel("M", locations, tuples)


@given(models())
def test_model_round_trip_both_formats(m):
    native = serialize_model(m)
    assert parse_model(native) == m
    assert serialize_model(parse_model(native)) == native
    js = serialize_model(m, "json")
    assert parse_model_json(js) == m
    assert serialize_model(parse_model_json(js), "json") == js


@given(models(), st.sampled_from(["r", "s"]), st.data())
def test_edit_then_inverse(m, rel, data):
    if not m.locations:
        return
    a = data.draw(st.sampled_from(m.location_ids()))
    b = data.draw(st.sampled_from(m.location_ids()))
    if m.find_tuple((rel, a, b)) is None:
        added = apply_edit(m, AddTrace(rel, a, b))
        assert added != m
        assert apply_edit(added, RemoveTrace(rel, a, b)) == m
    old = m.location(a).sig_type
    assert apply_edit(apply_edit(m, RetypeLocation(a, "Other")), RetypeLocation(a, old)) == m


def _case(seed, compose):
    c = random_case(seed, compose=compose)
    core = load_spec(c.spec_text)
    return c.model, core, build_hierarchy(core)


seeds = st.integers(0, 10_000)
quiet = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@given(seeds, st.booleans())
@quiet
def test_semi_naive_matches_naive(seed, compose):
    model, core, h = _case(seed, compose)
    r = Analyzer(model, core, h, "numpy").analyze(with_diagnoses=False)
    closure = naive_closure(core, model)
    assert set(r.closure()) == closure
    assert {(v.constraint_id, v.binding) for v in r.violations} == naive_violations(core, model, closure)
    n_rel, n = len(h.relations), len(model.locations)
    assert r.rounds <= n_rel * n * n


@given(seeds, st.booleans())
@quiet
def test_idempotent(seed, compose):
    model, core, h = _case(seed, compose)
    a = Analyzer(model, core, h, "numpy")
    _, inf = a.infer()
    closed = TraceModel(model.name, model.locations, model.tuples + tuple(
        TraceTuple(*t.key, "accepted") for t in inf.inferred))
    _, again = Analyzer(closed, core, h, "numpy").infer()
    assert again.inferred == ()


@given(seeds, st.booleans(), st.data())
@quiet
def test_monotone(seed, compose, data):
    model, core, h = _case(seed, compose)
    if not model.tuples:
        return
    drop = data.draw(st.sampled_from(model.tuples))
    smaller = TraceModel(model.name, model.locations, tuple(t for t in model.tuples if t != drop))
    big = set(Analyzer(model, core, h, "numpy").analyze(False).closure())
    small = set(Analyzer(smaller, core, h, "numpy").analyze(False).closure())
    assert small <= big


@given(seeds, st.booleans())
@quiet
def test_deterministic_and_backend_independent(seed, compose):
    model, core, h = _case(seed, compose)
    a = Analyzer(model, core, h, "numpy").analyze()
    b = Analyzer(model, core, h, "numpy").analyze()
    c = Analyzer(model, core, h, "numba").analyze()
    assert a == b == c


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_diagnosis_support_reproduces_violation(seed):
    model, core, h = _case(seed, True)
    r = Analyzer(model, core, h, "numpy").analyze()
    for dg in r.diagnoses:
        v = (dg.violation.constraint_id, dg.violation.binding)
        support = {t.key for t in dg.support}
        assert v in naive_violations(core, model, naive_closure(core, model, support))


def _needed(core, model, support, s, v):
    """``s`` is needed when ``support - {s}`` no longer yields ``v``."""
    return v not in naive_violations(core, model, naive_closure(core, model, support - {s}))


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_diagnosis_support_is_subset_minimal(seed):
    model, core, h = _case(seed, True)
    r = Analyzer(model, core, h, "numpy").analyze()
    for dg in r.diagnoses:
        v = (dg.violation.constraint_id, dg.violation.binding)
        support = {t.key for t in dg.support}
        for s in support:
            assert _needed(core, model, support, s, v)
