"""Syntax tree for trace-semantics sources.

Spans are excluded from equality so that a pretty-printed and re-parsed tree
compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..spans import SourceSpan

LOCATION_KINDS = ("text", "code", "model")

MACRO_ARITY = {
    "irreflexive": 1,
    "antisymmetric": 1,
    "symmetric": 1,
    "transitive": 1,
    "reflexive": 1,
    "injective": 1,
    "functional": 1,
    "excludes": 2,
}


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FieldDecl:
    name: str
    target: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SigDecl:
    name: str
    is_abstract: bool = False
    parent: Optional[str] = None
    # "extends" or "in"; both mean single inheritance here
    parent_keyword: Optional[str] = None
    fields: tuple[FieldDecl, ...] = ()
    location_kind: Optional[str] = None
    span: Optional[SourceSpan] = _span()


# -- body atoms --------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    src: str
    dst: str
    relation: str
    negated: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class TypeTest:
    var: str
    sig: str
    negated: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class And:
    items: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Or:
    items: tuple
    span: Optional[SourceSpan] = _span()


Atom = Union[Membership, TypeTest]
Expr = Union[Membership, TypeTest, And, Or]


# -- heads -------------------------------------------------------------------

@dataclass(frozen=True)
class Derive:
    src: str
    dst: str
    relation: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Forbid:
    src: str
    dst: str
    relation: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class MustEqual:
    left: str
    right: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Deny:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Exists:
    """``some x: S | head`` in a head position; parsed so it can be rejected."""

    var: str
    sig: str
    body: object
    span: Optional[SourceSpan] = _span()


Head = Union[Derive, Forbid, MustEqual, Deny]


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class VarDecl:
    names: tuple[str, ...]
    sig: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Implication:
    decls: tuple[VarDecl, ...]
    body: Expr
    # head expression: a Head, Exists, or And/Or over them
    head: object
    quantifier: str = "all"
    span: Optional[SourceSpan] = _span()

    @property
    def variables(self):
        return [(name, d.sig) for d in self.decls for name in d.names]


@dataclass(frozen=True)
class Macro:
    kind: str
    relations: tuple[str, ...]
    span: Optional[SourceSpan] = _span()

    @property
    def label(self):
        return f"{self.kind}[{','.join(self.relations)}]"


Formula = Union[Implication, Macro]


@dataclass(frozen=True)
class FactDecl:
    name: Optional[str]
    body: tuple
    span: Optional[SourceSpan] = _span()

    @property
    def ident(self):
        if self.name:
            return self.name
        return f"fact@{self.span.line if self.span else 0}"


@dataclass(frozen=True)
class SpecAst:
    sig_decls: tuple[SigDecl, ...] = ()
    fact_decls: tuple[FactDecl, ...] = ()
    # declaration order across both kinds, as ("sig"|"fact", index)
    order: tuple[tuple[str, int], ...] = field(default=(), compare=False, repr=False)
