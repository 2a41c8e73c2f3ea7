"""Source positions and the diagnostic records that carry them."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 0

    def __post_init__(self):
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"invalid span {self.line}:{self.column}+{self.length}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    span: SourceSpan
    message: str

    def __str__(self):
        return f"{self.span}: {self.message}"


class ParseError(Diagnostic):
    """Lexical or syntactic problem in a spec or model file."""


class SpecError(Diagnostic):
    """Semantic problem found while lowering a parsed spec."""


class DiagnosticsError(Exception):
    """Raised when a front-end stage fails; ``errors`` holds every problem found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class SpecSyntaxError(DiagnosticsError):
    pass


class SpecSemanticError(DiagnosticsError):
    pass


class ModelSyntaxError(DiagnosticsError):
    pass
