"""Lowered form of a spec: relation signatures, Horn rules and denial constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..spans import SourceSpan
from .ast import Deny, Derive, Forbid, Membership, MustEqual, SigDecl, TypeTest


@dataclass(frozen=True)
class RelationSig:
    name: str
    domain: str
    range: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Rule:
    id: str
    vars: tuple[tuple[str, str], ...]
    body: tuple[Union[Membership, TypeTest], ...]
    head: Derive
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Constraint:
    id: str
    vars: tuple[tuple[str, str], ...]
    body: tuple[Union[Membership, TypeTest], ...]
    head: Union[Forbid, MustEqual, Deny]
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CoreSpec:
    sigs: tuple[SigDecl, ...]
    relations: tuple[RelationSig, ...]
    rules: tuple[Rule, ...]
    constraints: tuple[Constraint, ...]

    def relation(self, name):
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def constraint(self, cid):
        for c in self.constraints:
            if c.id == cid:
                return c
        raise KeyError(cid)
