"""Render analysis results as text, JSON or Graphviz DOT."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .engine.analysis import slice_location

FORMATS = ("text", "json", "dot")

_RED = "\x1b[31m"
_BOLD = "\x1b[1m"
_RESET = "\x1b[0m"


class StaleResultError(ValueError):
    pass


@dataclass(frozen=True)
class RenderOptions:
    format: str = "text"
    include_derivations: bool = False
    slice_location: Optional[str] = None
    color: bool = False


def report_schema():
    text = resources.files("tracereason").joinpath("report_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _check_pair(result, model):
    if result.model_name != model.name:
        raise StaleResultError(f"result is for model {result.model_name!r}, not {model.name!r}")
    base = sorted(t.key for t in model.base_tuples())
    if base != [t.key for t in result.assigned]:
        raise StaleResultError("model tuples changed since the analysis ran")
    ids = set(model.location_ids())
    for t in result.inferred:
        if t.source not in ids or t.target not in ids:
            raise StaleResultError(f"inferred {t} references a location missing from the model")


def _key_str(key):
    return "{}({},{})".format(*key)


def _key_obj(key):
    return {"relation": key[0], "source": key[1], "target": key[2]}


def _tuple_obj(t):
    return {"relation": t.relation, "source": t.source, "target": t.target, "provenance": t.provenance}


def _violation_obj(v):
    return {
        "constraintId": v.constraint_id,
        "binding": dict(v.binding),
        "involved": [_key_obj(k) for k in v.involved],
    }


class _View:
    """The slice of a result that a renderer shows."""

    def __init__(self, result, model, loc):
        self.result = result
        self.assigned = list(result.assigned)
        self.inferred = list(result.inferred)
        self.violations = list(result.violations)
        self.diagnoses = list(result.diagnoses)
        self.locations = sorted(model.locations, key=lambda x: x.id)
        if loc is None:
            return
        sl = slice_location(result, model, loc)
        keep = {t.key for t in sl.tuples} | set(sl.premises) | set(sl.derivations)
        self.assigned = [t for t in self.assigned if t.key in keep]
        self.inferred = [t for t in self.inferred if t.key in keep]
        self.violations = [v for v in self.violations if keep & set(v.involved)]
        self.diagnoses = [d for d in self.diagnoses if d.violation in self.violations]
        ends = {loc} | {x for t in (*self.assigned, *self.inferred) for x in (t.source, t.target)}
        self.locations = [x for x in self.locations if x.id in ends]


def render_json(view):
    doc = {
        "stats": dict(view.result.stats),
        "assigned": [_tuple_obj(t) for t in view.assigned],
        "inferred": [
            {
                **_tuple_obj(t),
                "derivation": {
                    "ruleId": view.result.derivations[t.key].rule_id,
                    "premises": [_key_obj(p) for p in view.result.derivations[t.key].premises],
                },
            }
            for t in view.inferred
        ],
        "violations": [_violation_obj(v) for v in view.violations],
        "diagnoses": [
            {"violation": _violation_obj(d.violation), "support": [_tuple_obj(t) for t in d.support]}
            for d in view.diagnoses
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _dot_id(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(view):
    hot = {k for v in view.violations for k in v.involved}
    edges = {}
    for t in view.assigned:
        edges[t.key] = ("solid", t.key in hot)
    for t in view.inferred:
        edges[t.key] = ("dashed", t.key in hot)
    lines = [f"digraph {_dot_id(view.result.model_name)} {{", "  node [shape=box];"]
    for loc in view.locations:
        lines.append(f"  {_dot_id(loc.id)} [label={_dot_id(loc.id)}, tooltip={_dot_id(loc.sig_type)}];")
    done = set()
    for key in sorted(edges):
        if key in done:
            continue
        rel, src, dst = key
        style, red = edges[key]
        attrs = [f"label={_dot_id(rel)}", f"style={style}"]
        if red:
            attrs.append("color=red")
        back = (rel, dst, src)
        if back != key and edges.get(back) == (style, red):
            attrs.append("dir=both")
            done.add(back)
        lines.append(f"  {_dot_id(src)} -> {_dot_id(dst)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _chain(result, key, depth, out, assigned, seen):
    pad = "    " * depth
    if key in assigned:
        out.append(f"{pad}{_key_str(key)} [assigned]")
        return
    d = result.derivations.get(key)
    if d is None or key in seen:
        out.append(f"{pad}{_key_str(key)}")
        return
    out.append(f"{pad}{_key_str(key)} by {d.rule_id}")
    for p in d.premises:
        _chain(result, p, depth + 1, out, assigned, seen | {key})


def render_text(view, include_derivations=False, color=False):
    def red(s):
        return f"{_RED}{s}{_RESET}" if color else s

    def bold(s):
        return f"{_BOLD}{s}{_RESET}" if color else s

    r = view.result
    s = r.stats
    out = [f"model {r.model_name}: {s['assigned']} assigned, {s['inferred']} inferred, "
           f"{s['violations']} violation(s)", ""]
    out.append(bold(f"assigned traces ({len(view.assigned)})"))
    for t in view.assigned:
        suffix = "" if t.provenance == "assigned" else f" [{t.provenance}]"
        out.append(f"  {t}{suffix}")
    out.append("")
    out.append(bold(f"inferred traces ({len(view.inferred)})"))
    assigned = {t.key for t in r.assigned}
    for t in view.inferred:
        d = r.derivations[t.key]
        if include_derivations:
            chain = []
            _chain(r, t.key, 1, chain, assigned, frozenset())
            out.extend(chain)
        else:
            prem = ", ".join(_key_str(p) for p in d.premises) or "type facts"
            out.append(f"  {t} <- {d.rule_id}: {prem}")
    out.append("")
    out.append(bold(f"violations ({len(view.violations)})"))
    for v in view.violations:
        out.append(red(f"  {v}"))
        out.append(f"    involved: {', '.join(_key_str(k) for k in v.involved)}")
    if view.diagnoses:
        out.append("")
        out.append(bold(f"diagnoses ({len(view.diagnoses)})"))
        for dg in view.diagnoses:
            out.append(red(f"  {dg.violation}"))
            out.append(f"    caused by {len(dg.support)} assigned trace(s):")
            out.extend(f"      {t}" for t in dg.support)
    return "\n".join(out) + "\n"


def render_report(result, model, opts=RenderOptions()):
    """Render ``result`` (computed from ``model``) in ``opts.format``."""
    if opts.format not in FORMATS:
        raise ValueError(f"unknown report format {opts.format!r}")
    _check_pair(result, model)
    if opts.slice_location is not None and opts.slice_location not in model.location_ids():
        raise KeyError(opts.slice_location)
    view = _View(result, model, opts.slice_location)
    if opts.format == "json":
        return render_json(view)
    if opts.format == "dot":
        return render_dot(view)
    return render_text(view, opts.include_derivations, opts.color)


def render_explanations(result, color=False):
    """One block per violation listing the assigned traces that cause it."""
    blocks = []
    for dg in result.diagnoses:
        head = f"inconsistency: {dg.violation}"
        lines = [f"{_RED}{head}{_RESET}" if color else head]
        lines.append(f"  involved traces: {', '.join(_key_str(k) for k in dg.violation.involved)}")
        lines.append(f"  caused by {len(dg.support)} assigned trace(s):")
        lines.extend(f"    {t}" for t in dg.support)
        blocks.append("\n".join(lines))
    if not blocks:
        return "no inconsistencies\n"
    return "\n\n".join(blocks) + "\n"
