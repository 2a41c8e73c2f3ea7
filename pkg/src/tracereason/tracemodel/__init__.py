"""Trace models: typed locations, trace tuples, file formats and edits."""

from .edits import (
    AddLocation,
    AddTrace,
    EditError,
    RemoveLocation,
    RemoveTrace,
    RetypeLocation,
    RetypeTrace,
    accept_inferred,
    apply_edit,
)
from .io import load_model, parse_model, parse_model_json, serialize_model
from .types import PROVENANCES, Location, Payload, TraceModel, TraceTuple

__all__ = [
    "AddLocation",
    "AddTrace",
    "EditError",
    "Location",
    "PROVENANCES",
    "Payload",
    "RemoveLocation",
    "RemoveTrace",
    "RetypeLocation",
    "RetypeTrace",
    "TraceModel",
    "TraceTuple",
    "accept_inferred",
    "apply_edit",
    "load_model",
    "parse_model",
    "parse_model_json",
    "serialize_model",
]
