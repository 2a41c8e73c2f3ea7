"""Tokenizer shared by the .tarski and .trace front ends."""

from __future__ import annotations

from dataclasses import dataclass

from .spans import ParseError, SourceSpan

IDENT = "IDENT"
INT = "INT"
STRING = "STRING"
PUNCT = "PUNCT"
EOF = "EOF"

_TWO_CHAR = ("->",)
_ONE_CHAR = "{}()[],:|=@;"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan

    def is_punct(self, value):
        return self.kind == PUNCT and self.value == value

    def is_word(self, value):
        return self.kind == IDENT and self.value == value


def _ident_start(c):
    return c.isascii() and (c.isalpha() or c == "_")


def _ident_part(c):
    return c.isascii() and (c.isalnum() or c in "_'$")


def tokenize(text, file_name="<input>"):
    """Split ``text`` into tokens.

    Never raises on bad input: returns ``(tokens, errors)`` where the token
    list always ends with an EOF token.
    """
    tokens = []
    errors = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def span(ln, cl, length):
        return SourceSpan(file_name, ln, cl, length)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r\f﻿":
            i += 1
            col += 1
            continue
        if text.startswith("//", i) or text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if text.startswith("/*", i):
            start_line, start_col = line, col
            end = text.find("*/", i + 2)
            if end < 0:
                errors.append(ParseError(span(start_line, start_col, 2), "unterminated block comment"))
                end = n
            else:
                end += 2
            while i < end:
                if text[i] == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
                i += 1
            continue
        start_line, start_col = line, col
        if _ident_start(c):
            j = i + 1
            while j < n and _ident_part(text[j]):
                j += 1
            tokens.append(Token(IDENT, text[i:j], span(line, col, j - i)))
            col += j - i
            i = j
            continue
        if c.isascii() and c.isdigit():
            j = i + 1
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(Token(INT, text[i:j], span(line, col, j - i)))
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            chars = []
            closed = False
            while j < n and text[j] != "\n":
                if text[j] == "\\" and j + 1 < n and text[j + 1] in '"\\':
                    chars.append(text[j + 1])
                    j += 2
                    continue
                if text[j] == '"':
                    closed = True
                    j += 1
                    break
                chars.append(text[j])
                j += 1
            if not closed:
                errors.append(ParseError(span(line, col, j - i), "unterminated string literal"))
            tokens.append(Token(STRING, "".join(chars), span(line, col, j - i)))
            col += j - i
            i = j
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token(PUNCT, two, span(line, col, 2)))
            i += 2
            col += 2
            continue
        if c in _ONE_CHAR:
            tokens.append(Token(PUNCT, c, span(line, col, 1)))
            i += 1
            col += 1
            continue
        errors.append(ParseError(span(start_line, start_col, 1), f"unexpected character {c!r}"))
        i += 1
        col += 1
    tokens.append(Token(EOF, "", span(line, col, 0)))
    return tokens, errors


class TokenStream:
    """Cursor over a token list with the small helpers recursive descent needs."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def peek(self, offset=1):
        k = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[k]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at_end(self):
        return self.current.kind == EOF
