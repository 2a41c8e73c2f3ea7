"""Value-semantics edits on trace models. Every operation returns a new model."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from .types import Location, TraceModel, TraceTuple


class EditError(Exception):
    def __init__(self, kind, message):
        self.kind = kind
        super().__init__(message)


@dataclass(frozen=True)
class AddLocation:
    location: Location


@dataclass(frozen=True)
class RemoveLocation:
    id: str


@dataclass(frozen=True)
class RetypeLocation:
    id: str
    sig_type: str


@dataclass(frozen=True)
class AddTrace:
    relation: str
    source: str
    target: str
    provenance: str = "assigned"


@dataclass(frozen=True)
class RemoveTrace:
    relation: str
    source: str
    target: str


@dataclass(frozen=True)
class RetypeTrace:
    relation: str
    source: str
    target: str
    new_relation: str


Edit = Union[AddLocation, RemoveLocation, RetypeLocation, AddTrace, RemoveTrace, RetypeTrace]


def _require_location(model, loc_id):
    if loc_id not in model.location_ids():
        raise EditError("UnknownLocation", f"unknown location '{loc_id}'")


def _require_tuple(model, key):
    t = model.find_tuple(key)
    if t is None:
        raise EditError("UnknownTrace", "unknown trace {}({},{})".format(*key))
    return t


def apply_edit(model, edit):
    """Apply one edit; raises :class:`EditError` and leaves ``model`` untouched."""
    if isinstance(edit, AddLocation):
        if edit.location.id in model.location_ids():
            raise EditError("DuplicateLocation", f"location '{edit.location.id}' already exists")
        return replace(model, locations=model.locations + (edit.location,))

    if isinstance(edit, RemoveLocation):
        _require_location(model, edit.id)
        return replace(
            model,
            locations=tuple(loc for loc in model.locations if loc.id != edit.id),
            tuples=tuple(t for t in model.tuples if edit.id not in (t.source, t.target)),
        )

    if isinstance(edit, RetypeLocation):
        _require_location(model, edit.id)
        return replace(model, locations=tuple(
            replace(loc, sig_type=edit.sig_type) if loc.id == edit.id else loc
            for loc in model.locations
        ))

    if isinstance(edit, AddTrace):
        _require_location(model, edit.source)
        _require_location(model, edit.target)
        key = (edit.relation, edit.source, edit.target)
        if model.find_tuple(key) is not None:
            raise EditError("DuplicateTrace", "trace {}({},{}) already exists".format(*key))
        return replace(model, tuples=model.tuples + (TraceTuple(*key, edit.provenance),))

    if isinstance(edit, RemoveTrace):
        key = (edit.relation, edit.source, edit.target)
        _require_tuple(model, key)
        return replace(model, tuples=tuple(t for t in model.tuples if t.key != key))

    if isinstance(edit, RetypeTrace):
        key = (edit.relation, edit.source, edit.target)
        old = _require_tuple(model, key)
        new_key = (edit.new_relation, edit.source, edit.target)
        if new_key != key and model.find_tuple(new_key) is not None:
            raise EditError("DuplicateTrace", "trace {}({},{}) already exists".format(*new_key))
        return replace(model, tuples=tuple(
            replace(t, relation=edit.new_relation) if t is old else t for t in model.tuples
        ))

    raise TypeError(f"not an edit: {edit!r}")


def accept_inferred(model, result, tuples):
    """Append inferred tuples from ``result`` to ``model`` with provenance ``accepted``."""
    inferred = {t.key for t in result.inferred}
    added = []
    for key in tuples:
        key = tuple(key)
        if key not in inferred:
            raise EditError("NotInferred", "{}({},{}) is not in the inferred set".format(*key))
        if model.find_tuple(key) is not None or key in {t.key for t in added}:
            raise EditError("DuplicateTrace", "{}({},{}) is already in the model".format(*key))
        added.append(TraceTuple(*key, "accepted"))
    if not added:
        return model
    return replace(model, tuples=model.tuples + tuple(added))
