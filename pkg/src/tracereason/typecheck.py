"""Signature hierarchy, model type checking, and trace-type suggestion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .spans import SourceSpan

TYPE_ERROR_KINDS = (
    "UnknownSig",
    "CycleInHierarchy",
    "DuplicateName",
    "AbstractInstantiation",
    "DomainMismatch",
    "RangeMismatch",
    "PayloadSchemaMismatch",
)

# required / forbidden payload keys per location kind
PAYLOAD_SCHEMAS = {
    "text": ({"resource"}, {"element"}),
    "code": ({"resource", "offset", "length"}, {"element"}),
    "model": ({"resource", "element"}, {"offset", "length"}),
}


@dataclass(frozen=True)
class TypeIssue:
    kind: str
    subject: str
    detail: str
    span: Optional[SourceSpan] = field(default=None, compare=False)

    def __str__(self):
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.kind} [{self.subject}]: {self.detail}"


class HierarchyError(Exception):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class TypingError(Exception):
    """A single typing failure raised by a query (e.g. a bad suggestion request)."""

    def __init__(self, issue):
        self.issue = issue
        super().__init__(str(issue))


class UnknownLocationError(KeyError):
    def __str__(self):
        return f"unknown location '{self.args[0]}'"


@dataclass(frozen=True)
class SigInfo:
    name: str
    parent: Optional[str]
    is_abstract: bool
    location_kind: Optional[str]
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class TypeHierarchy:
    sigs: dict
    relations: dict

    def _check(self, name):
        if name not in self.sigs:
            raise TypingError(TypeIssue("UnknownSig", name, f"unknown signature '{name}'"))

    def ancestors(self, name):
        """``name`` followed by its ancestors, nearest first."""
        self._check(name)
        out = []
        cur = name
        while cur is not None:
            out.append(cur)
            cur = self.sigs[cur].parent
        return out

    def is_subtype(self, sub, sup):
        self._check(sup)
        return sup in self.ancestors(sub)

    def location_kind(self, name):
        for s in self.ancestors(name):
            if self.sigs[s].location_kind:
                return self.sigs[s].location_kind
        return None

    def subtypes(self, name):
        self._check(name)
        return sorted(s for s in self.sigs if name in self.ancestors(s))


def build_hierarchy(core):
    """Build the signature forest for a CoreSpec; raises :class:`HierarchyError`."""
    errors = []
    sigs = {}
    for decl in core.sigs:
        if decl.name in sigs:
            errors.append(TypeIssue("DuplicateName", decl.name, f"signature '{decl.name}' declared twice", decl.span))
            continue
        sigs[decl.name] = SigInfo(decl.name, decl.parent, decl.is_abstract, decl.location_kind, decl.span)

    relations = {}
    field_names = set()
    for decl in core.sigs:
        for f in decl.fields:
            if f.name in field_names:
                errors.append(TypeIssue("DuplicateName", f.name, f"relation '{f.name}' declared twice", f.span))
                continue
            field_names.add(f.name)
            if f.target not in sigs:
                errors.append(TypeIssue("UnknownSig", f.target,
                                        f"field '{f.name}' targets unknown signature '{f.target}'", f.span))
    for rel in core.relations:
        relations[rel.name] = rel

    for info in sigs.values():
        if info.parent is not None and info.parent not in sigs:
            errors.append(TypeIssue("UnknownSig", info.parent,
                                    f"'{info.name}' extends unknown signature '{info.parent}'", info.span))

    reported = set()
    for start in sigs:
        seen = []
        cur = start
        while cur is not None and cur in sigs:
            if cur in seen:
                cycle = tuple(sorted(seen[seen.index(cur):]))
                if cycle not in reported:
                    reported.add(cycle)
                    path = " -> ".join(seen[seen.index(cur):] + [cur])
                    errors.append(TypeIssue("CycleInHierarchy", cur, f"inheritance cycle {path}", sigs[cur].span))
                break
            seen.append(cur)
            cur = sigs[cur].parent

    if errors:
        raise HierarchyError(errors)
    return TypeHierarchy(sigs, relations)


def _payload_issues(loc, kind):
    required, forbidden = PAYLOAD_SCHEMAS[kind]
    present = {k for k, _ in loc.payload.items()}
    issues = []
    missing = sorted(required - present)
    if missing:
        issues.append(TypeIssue("PayloadSchemaMismatch", loc.id,
                                f"{kind} location lacks {', '.join(missing)}", loc.span))
    extra = sorted(forbidden & present)
    if extra:
        issues.append(TypeIssue("PayloadSchemaMismatch", loc.id,
                                f"{kind} location must not carry {', '.join(extra)}", loc.span))
    return issues


def check_model(model, h):
    """Type-check ``model`` against ``h``; returns a list of issues (empty when well typed)."""
    issues = []
    types = {}
    for loc in model.locations:
        if loc.sig_type not in h.sigs:
            issues.append(TypeIssue("UnknownSig", loc.sig_type,
                                    f"location '{loc.id}' has unknown type '{loc.sig_type}'", loc.span))
            continue
        types[loc.id] = loc.sig_type
        if h.sigs[loc.sig_type].is_abstract:
            issues.append(TypeIssue("AbstractInstantiation", loc.id,
                                    f"location '{loc.id}' cannot have abstract type '{loc.sig_type}'", loc.span))
        kind = h.location_kind(loc.sig_type)
        if kind is not None:
            issues.extend(_payload_issues(loc, kind))

    for t in model.tuples:
        rel = h.relations.get(t.relation)
        if rel is None:
            issues.append(TypeIssue("UnknownSig", t.relation, f"trace {t} uses unknown relation '{t.relation}'"))
            continue
        src = types.get(t.source)
        if src is not None and not h.is_subtype(src, rel.domain):
            issues.append(TypeIssue("DomainMismatch", str(t),
                                    f"source {t.source}: {src} is not a subtype of {rel.domain}"))
        dst = types.get(t.target)
        if dst is not None and not h.is_subtype(dst, rel.range):
            issues.append(TypeIssue("RangeMismatch", str(t),
                                    f"target {t.target}: {dst} is not a subtype of {rel.range}"))
    return issues


def _location_type(model, loc_id):
    try:
        return model.location(loc_id).sig_type
    except KeyError:
        raise UnknownLocationError(loc_id) from None


def suggest_trace_types(model, h, loc_id, side="source"):
    """Relations that ``loc_id`` may take part in on ``side``, sorted by name."""
    if side not in ("source", "target"):
        raise ValueError(f"side must be 'source' or 'target', not {side!r}")
    sig = _location_type(model, loc_id)
    if sig not in h.sigs:
        return []
    out = []
    for name, rel in h.relations.items():
        bound = rel.domain if side == "source" else rel.range
        if bound in h.sigs and h.is_subtype(sig, bound):
            out.append(name)
    return sorted(out)


def suggest_targets(model, h, loc_id, relation):
    """Locations that may be the target of ``relation`` from ``loc_id``, sorted by id."""
    sig = _location_type(model, loc_id)
    rel = h.relations.get(relation)
    if rel is None:
        raise TypingError(TypeIssue("UnknownSig", relation, f"unknown relation '{relation}'"))
    if sig not in h.sigs or not h.is_subtype(sig, rel.domain):
        raise TypingError(TypeIssue("DomainMismatch", loc_id,
                                    f"{loc_id}: {sig} cannot be the source of {relation} ({rel.domain})"))
    return sorted(
        loc.id for loc in model.locations
        if loc.id != loc_id and loc.sig_type in h.sigs and h.is_subtype(loc.sig_type, rel.range)
    )
