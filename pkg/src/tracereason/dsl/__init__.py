"""Front end for the trace-semantics language."""

from .ast import SpecAst
from .core import Constraint, CoreSpec, RelationSig, Rule
from .desugar import desugar, dnf, load_spec
from .parser import parse_spec
from .printer import format_spec

__all__ = [
    "Constraint",
    "CoreSpec",
    "RelationSig",
    "Rule",
    "SpecAst",
    "desugar",
    "dnf",
    "format_spec",
    "load_spec",
    "parse_spec",
]
