"""Reading and writing trace models.

Native format (``.trace``)::

    model ECAS
    location r11 : HighLevelReq { resource = "reqs/ecas.txt", offset = 0, length = 98 }
    trace refines (r60 -> r11)
    trace satisfies (i14 -> r11) provenance = accepted

JSON format mirrors the same content with arrays sorted by id and by
``(relation, source, target)``.
"""

from __future__ import annotations

import json

from ..lexer import EOF, IDENT, INT, STRING, TokenStream, tokenize
from ..spans import ModelSyntaxError, ParseError, SourceSpan
from .types import PAYLOAD_KEYS, PROVENANCES, Location, Payload, TraceModel, TraceTuple

_INT_KEYS = ("offset", "length")


class _Bail(Exception):
    pass


class _ModelParser:
    def __init__(self, text, file_name):
        tokens, self.errors = tokenize(text, file_name)
        self.ts = TokenStream(tokens)

    def error(self, message, span=None):
        self.errors.append(ParseError(span or self.ts.current.span, message))
        raise _Bail

    def found(self):
        tok = self.ts.current
        return "end of input" if tok.kind == EOF else repr(tok.value)

    def word(self, value):
        if not self.ts.current.is_word(value):
            self.error(f"expected '{value}', found {self.found()}")
        return self.ts.advance()

    def punct(self, value):
        if not self.ts.current.is_punct(value):
            self.error(f"expected '{value}', found {self.found()}")
        return self.ts.advance()

    def ident(self, what):
        if self.ts.current.kind != IDENT:
            self.error(f"expected {what}, found {self.found()}")
        return self.ts.advance()

    def sync(self):
        while not self.ts.at_end():
            if self.ts.current.kind == IDENT and self.ts.current.value in ("location", "trace"):
                return
            self.ts.advance()

    def parse(self):
        name = None
        try:
            self.word("model")
            name = self.ident("model name").value
        except _Bail:
            self.sync()
        locations = []
        tuples = []
        while not self.ts.at_end():
            start = self.ts.pos
            try:
                if self.ts.current.is_word("location"):
                    locations.append(self.location())
                elif self.ts.current.is_word("trace"):
                    tuples.append(self.trace())
                else:
                    self.error(f"expected 'location' or 'trace', found {self.found()}")
            except _Bail:
                if self.ts.pos == start:
                    self.ts.advance()
                self.sync()
        return name, locations, tuples

    def location(self):
        first = self.ts.advance()
        loc_id = self.ident("location id").value
        self.punct(":")
        sig = self.ident("signature name").value
        values = {}
        if self.ts.current.is_punct("{"):
            self.ts.advance()
            while not self.ts.current.is_punct("}"):
                if self.ts.at_end():
                    self.error("unterminated location payload", first.span)
                key_tok = self.ident("payload key")
                key = key_tok.value
                if key not in PAYLOAD_KEYS:
                    self.error(f"unknown payload key '{key}'", key_tok.span)
                if key in values:
                    self.error(f"duplicate payload key '{key}'", key_tok.span)
                self.punct("=")
                val = self.ts.current
                if key in _INT_KEYS:
                    if val.kind != INT:
                        self.error(f"'{key}' must be a non-negative integer")
                    values[key] = int(val.value)
                else:
                    if val.kind != STRING:
                        self.error(f"'{key}' must be a string literal")
                    values[key] = val.value
                self.ts.advance()
                if self.ts.current.is_punct(","):
                    self.ts.advance()
            self.ts.advance()
        return Location(loc_id, sig, Payload(**values), first.span)

    def trace(self):
        first = self.ts.advance()
        rel = self.ident("relation name").value
        self.punct("(")
        src = self.ident("source location id").value
        self.punct("->")
        dst = self.ident("target location id").value
        self.punct(")")
        provenance = "assigned"
        if self.ts.current.is_word("provenance"):
            self.ts.advance()
            self.punct("=")
            tok = self.ident("provenance")
            if tok.value not in PROVENANCES:
                self.error(f"provenance must be one of {', '.join(PROVENANCES)}", tok.span)
            provenance = tok.value
        return TraceTuple(rel, src, dst, provenance), first.span


def _check_references(name, locations, tuples, errors, file_name):
    seen = {}
    for loc in locations:
        if loc.id in seen:
            errors.append(ParseError(loc.span, f"duplicate location id '{loc.id}'"))
        else:
            seen[loc.id] = loc
    keys = set()
    out = []
    for t, span in tuples:
        if t.key in keys:
            errors.append(ParseError(span, f"duplicate trace {t}"))
            continue
        keys.add(t.key)
        for end in (t.source, t.target):
            if end not in seen:
                errors.append(ParseError(span, f"trace {t} references unknown location '{end}'"))
        out.append(t)
    if name is None and not errors:
        errors.append(ParseError(SourceSpan(file_name, 1, 1, 0), "missing 'model <name>' header"))
    return out


def parse_model(text, file_name="<model>"):
    """Parse the native model format; raises :class:`ModelSyntaxError`."""
    p = _ModelParser(text, file_name)
    name, locations, raw = p.parse()
    errors = p.errors
    tuples = _check_references(name, locations, raw, errors, file_name)
    if errors:
        raise ModelSyntaxError(sorted(errors, key=lambda e: e.span))
    return TraceModel(name, tuple(locations), tuple(tuples))


def parse_model_json(text, file_name="<model.json>"):
    """Parse the JSON model format; raises :class:`ModelSyntaxError`."""

    def fail(msg, line=1, col=1):
        raise ModelSyntaxError([ParseError(SourceSpan(file_name, line, col, 0), msg)])

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        fail(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno)
    if not isinstance(doc, dict) or not isinstance(doc.get("name"), str):
        fail("model JSON must be an object with a string 'name'")
    locations = []
    for entry in doc.get("locations", []):
        if not isinstance(entry, dict) or not {"id", "type"} <= entry.keys():
            fail(f"location entries need 'id' and 'type': {entry!r}")
        extra = set(entry) - {"id", "type", "kind", *PAYLOAD_KEYS}
        if extra:
            fail(f"unknown location keys {sorted(extra)} in {entry['id']!r}")
        for k in _INT_KEYS:
            if k in entry and (not isinstance(entry[k], int) or isinstance(entry[k], bool) or entry[k] < 0):
                fail(f"{k!r} of {entry['id']!r} must be a non-negative integer")
        payload = Payload(**{k: entry[k] for k in PAYLOAD_KEYS if k in entry})
        locations.append(Location(entry["id"], entry["type"], payload, SourceSpan(file_name, 1, 1, 0)))
    raw = []
    for entry in doc.get("tuples", []):
        if not isinstance(entry, dict) or not {"relation", "source", "target"} <= entry.keys():
            fail(f"tuple entries need 'relation', 'source', 'target': {entry!r}")
        prov = entry.get("provenance", "assigned")
        if prov not in PROVENANCES:
            fail(f"bad provenance {prov!r}")
        raw.append((TraceTuple(entry["relation"], entry["source"], entry["target"], prov),
                    SourceSpan(file_name, 1, 1, 0)))
    errors = []
    tuples = _check_references(doc["name"], locations, raw, errors, file_name)
    if errors:
        raise ModelSyntaxError(errors)
    return TraceModel(doc["name"], tuple(locations), tuple(tuples))


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _location_kind(loc, hierarchy):
    if hierarchy is not None and loc.sig_type in hierarchy.sigs:
        kind = hierarchy.location_kind(loc.sig_type)
        if kind:
            return kind
    return loc.payload.guess_kind()


def serialize_model(model, fmt="native", hierarchy=None):
    """Canonical text for ``model``: locations by id, tuples by key.

    ``hierarchy`` only matters for JSON, where it supplies each location's
    ``kind``.
    """
    locations = sorted(model.locations, key=lambda loc: loc.id)
    tuples = sorted(model.tuples, key=lambda t: t.key)
    if fmt == "json":
        doc = {
            "name": model.name,
            "locations": [
                {"id": loc.id, "type": loc.sig_type, "kind": _location_kind(loc, hierarchy),
                 **dict(loc.payload.items())}
                for loc in locations
            ],
            "tuples": [
                {"relation": t.relation, "source": t.source, "target": t.target, "provenance": t.provenance}
                for t in tuples
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "native":
        raise ValueError(f"unknown model format {fmt!r}")
    lines = [f"model {model.name}"]
    if locations:
        lines.append("")
    for loc in locations:
        fields = ", ".join(f"{k} = {v}" if k in _INT_KEYS else f"{k} = {_quote(v)}"
                           for k, v in loc.payload.items())
        body = f" {{ {fields} }}" if fields else ""
        lines.append(f"location {loc.id} : {loc.sig_type}{body}")
    if tuples:
        lines.append("")
    for t in tuples:
        prov = "" if t.provenance == "assigned" else f" provenance = {t.provenance}"
        lines.append(f"trace {t.relation} ({t.source} -> {t.target}){prov}")
    return "\n".join(lines) + "\n"


def load_model(text, file_name="<model>"):
    """Parse either format, choosing JSON when the text is a JSON object."""
    if text.lstrip().startswith("{"):
        return parse_model_json(text, file_name)
    return parse_model(text, file_name)
