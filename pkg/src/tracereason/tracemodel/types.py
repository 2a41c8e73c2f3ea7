from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..spans import SourceSpan

PROVENANCES = ("assigned", "inferred", "accepted")
# provenances the reasoner treats as given facts
BASE_PROVENANCES = ("assigned", "accepted")
PAYLOAD_KEYS = ("resource", "offset", "length", "element")


@dataclass(frozen=True)
class Payload:
    resource: Optional[str] = None
    offset: Optional[int] = None
    length: Optional[int] = None
    element: Optional[str] = None

    def items(self):
        return [(k, getattr(self, k)) for k in PAYLOAD_KEYS if getattr(self, k) is not None]

    def guess_kind(self):
        """Best-effort kind when no hierarchy is available to say otherwise."""
        if self.element is not None:
            return "model"
        if self.offset is not None and self.length is not None:
            return "code"
        return "text"


@dataclass(frozen=True)
class Location:
    id: str
    sig_type: str
    payload: Payload = Payload()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, order=True)
class TraceTuple:
    relation: str
    source: str
    target: str
    provenance: str = field(default="assigned", compare=False)

    @property
    def key(self):
        return (self.relation, self.source, self.target)

    def __str__(self):
        return f"{self.relation}({self.source},{self.target})"


@dataclass(frozen=True, eq=False)
class TraceModel:
    """Typed locations plus trace tuples.

    Equality is structural and order-insensitive: two models are equal when
    they have the same name, locations and tuples (with provenance).
    """

    name: str
    locations: tuple[Location, ...] = ()
    tuples: tuple[TraceTuple, ...] = ()

    def _canonical(self):
        return (
            self.name,
            tuple(sorted(self.locations, key=lambda loc: loc.id)),
            tuple(sorted((t.key, t.provenance) for t in self.tuples)),
        )

    def __eq__(self, other):
        if not isinstance(other, TraceModel):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def location(self, loc_id):
        for loc in self.locations:
            if loc.id == loc_id:
                return loc
        raise KeyError(loc_id)

    def location_ids(self):
        return [loc.id for loc in self.locations]

    def find_tuple(self, key):
        for t in self.tuples:
            if t.key == tuple(key):
                return t
        return None

    def base_tuples(self):
        return [t for t in self.tuples if t.provenance in BASE_PROVENANCES]

    def canonical(self):
        return TraceModel(
            self.name,
            tuple(sorted(self.locations, key=lambda loc: loc.id)),
            tuple(sorted(self.tuples, key=lambda t: t.key)),
        )
