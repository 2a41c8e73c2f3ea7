"""Recursive-descent parser for the restricted relational spec language.

Grammar (informal)::

    spec     := (sigDecl | factDecl)*
    sigDecl  := ["abstract"] "sig" Ident [("extends" | "in") Ident]
                "{" (Ident ":" "set" Ident [","])* "}" ["@location" "(" kind ")"]
    factDecl := "fact" [Ident] "{" formula* "}"
    formula  := quant decl ("," decl)* "|" body "implies" head
              | macro "[" Ident ("," Ident)* "]"
    decl     := Ident ("," Ident)* ":" Ident
    body     := conj ("or" conj)*          conj := prim ("and" prim)*
    prim     := "(" body ")" | x "->" y ["not"] "in" Rel | x ["not"] "in" Sig
    head     := hconj ("or" hconj)*        hconj := hprim ("and" hprim)*
    hprim    := "(" head ")" | "none" | x "=" y | x "->" y ["not"] "in" Rel
              | "some" x ":" Sig "|" hprim

Negated body atoms, disjunctive heads and non-universal quantifiers are
accepted here and rejected during desugaring, which has the context to
explain why.
"""

from __future__ import annotations

from ..lexer import EOF, IDENT, TokenStream, tokenize
from ..spans import ParseError, SourceSpan, SpecSyntaxError
from . import ast

KEYWORDS = frozenset({
    "abstract", "sig", "extends", "in", "fact", "all", "some", "no", "one",
    "lone", "implies", "and", "or", "not", "none", "set",
})
QUANTIFIERS = ("all", "some", "no", "one", "lone")
_MULTIPLICITIES = ("set", "one", "lone", "some")


class _Bail(Exception):
    pass


class _Parser:
    def __init__(self, text, file_name):
        self.file_name = file_name
        tokens, self.errors = tokenize(text, file_name)
        self.ts = TokenStream(tokens)

    # -- helpers ------------------------------------------------------------

    def error(self, message, span=None):
        self.errors.append(ParseError(span or self.ts.current.span, message))
        raise _Bail

    def describe(self, tok):
        if tok.kind == EOF:
            return "end of input"
        return repr(tok.value)

    def expect_punct(self, value, context=""):
        tok = self.ts.current
        if not tok.is_punct(value):
            where = f" {context}" if context else ""
            self.error(f"expected '{value}'{where}, found {self.describe(tok)}")
        return self.ts.advance()

    def expect_word(self, value):
        tok = self.ts.current
        if not tok.is_word(value):
            self.error(f"expected '{value}', found {self.describe(tok)}")
        return self.ts.advance()

    def ident(self, what="identifier"):
        tok = self.ts.current
        if tok.kind != IDENT or tok.value in KEYWORDS:
            self.error(f"expected {what}, found {self.describe(tok)}")
        return self.ts.advance()

    def span_from(self, start):
        prev = self.ts.tokens[self.ts.pos - 1] if self.ts.pos > 0 else start
        if prev.span.line == start.span.line:
            length = prev.span.column + prev.span.length - start.span.column
        else:
            length = start.span.length
        return SourceSpan(self.file_name, start.span.line, start.span.column, max(length, 0))

    def sync(self):
        while not self.ts.at_end():
            tok = self.ts.current
            if tok.kind == IDENT and tok.value in ("sig", "abstract", "fact"):
                return
            self.ts.advance()

    # -- top level ------------------------------------------------------------

    def parse(self):
        sigs = []
        facts = []
        order = []
        while not self.ts.at_end():
            tok = self.ts.current
            start = self.ts.pos
            try:
                if tok.is_word("sig") or tok.is_word("abstract"):
                    sigs.append(self.sig_decl())
                    order.append(("sig", len(sigs) - 1))
                elif tok.is_word("fact"):
                    facts.append(self.fact_decl())
                    order.append(("fact", len(facts) - 1))
                else:
                    self.error(f"expected 'sig' or 'fact', found {self.describe(tok)}")
            except _Bail:
                if self.ts.pos == start:
                    self.ts.advance()
                self.sync()
        return ast.SpecAst(tuple(sigs), tuple(facts), tuple(order))

    def sig_decl(self):
        first = self.ts.current
        is_abstract = False
        if first.is_word("abstract"):
            self.ts.advance()
            is_abstract = True
        self.expect_word("sig")
        name = self.ident("signature name").value
        parent = None
        parent_kw = None
        if self.ts.current.is_word("extends") or self.ts.current.is_word("in"):
            parent_kw = self.ts.advance().value
            parent = self.ident("parent signature").value
        open_tok = self.expect_punct("{", "to open signature body")
        fields = []
        while not self.ts.current.is_punct("}"):
            if self.ts.at_end():
                self.error("unterminated signature block", open_tok.span)
            fstart = self.ts.current
            fname = self.ident("field name").value
            self.expect_punct(":", "after field name")
            mult = self.ts.current
            if mult.kind == IDENT and mult.value in _MULTIPLICITIES:
                if mult.value != "set":
                    self.error(f"only 'set' multiplicity is supported, found '{mult.value}'")
                self.ts.advance()
            else:
                self.error("expected 'set' multiplicity for a binary relation field")
            target = self.ident("field target signature").value
            fields.append(ast.FieldDecl(fname, target, self.span_from(fstart)))
            if self.ts.current.is_punct(","):
                self.ts.advance()
        self.ts.advance()
        kind = None
        if self.ts.current.is_punct("@"):
            self.ts.advance()
            self.expect_word("location")
            self.expect_punct("(", "after @location")
            ktok = self.ts.current
            if ktok.kind != IDENT or ktok.value not in ast.LOCATION_KINDS:
                self.error(f"location kind must be one of text, code, model; found {self.describe(ktok)}")
            kind = self.ts.advance().value
            self.expect_punct(")", "to close @location")
        return ast.SigDecl(name, is_abstract, parent, parent_kw, tuple(fields), kind, self.span_from(first))

    def fact_decl(self):
        first = self.expect_word("fact")
        name = None
        if self.ts.current.kind == IDENT and self.ts.current.value not in KEYWORDS:
            name = self.ts.advance().value
        open_tok = self.expect_punct("{", "to open fact body")
        body = []
        while not self.ts.current.is_punct("}"):
            if self.ts.at_end():
                self.error("unterminated fact block", open_tok.span)
            body.append(self.formula())
        self.ts.advance()
        return ast.FactDecl(name, tuple(body), self.span_from(first))

    # -- formulas -------------------------------------------------------------

    def formula(self):
        tok = self.ts.current
        if tok.kind == IDENT and tok.value in QUANTIFIERS:
            return self.implication()
        if tok.kind == IDENT and self.ts.peek().is_punct("["):
            return self.macro()
        self.error(f"expected a quantified formula or property macro, found {self.describe(tok)}")

    def macro(self):
        first = self.ts.advance()
        if first.value not in ast.MACRO_ARITY:
            known = ", ".join(sorted(ast.MACRO_ARITY))
            self.error(f"unknown property macro '{first.value}' (known: {known})", first.span)
        self.expect_punct("[")
        rels = [self.ident("relation name").value]
        while self.ts.current.is_punct(","):
            self.ts.advance()
            rels.append(self.ident("relation name").value)
        self.expect_punct("]", "to close macro arguments")
        arity = ast.MACRO_ARITY[first.value]
        if len(rels) != arity:
            self.error(f"{first.value} takes {arity} relation(s), got {len(rels)}", self.span_from(first))
        return ast.Macro(first.value, tuple(rels), self.span_from(first))

    def implication(self):
        first = self.ts.advance()
        decls = [self.var_decl()]
        while self.ts.current.is_punct(","):
            self.ts.advance()
            decls.append(self.var_decl())
        self.expect_punct("|", "after variable declarations")
        body = self.body_or()
        self.expect_word("implies")
        head = self.head_or()
        return ast.Implication(tuple(decls), body, head, first.value, self.span_from(first))

    def var_decl(self):
        first = self.ts.current
        names = [self.ident("variable name").value]
        while self.ts.current.is_punct(","):
            self.ts.advance()
            names.append(self.ident("variable name").value)
        self.expect_punct(":", "after variable names")
        sig = self.ident("signature name").value
        return ast.VarDecl(tuple(names), sig, self.span_from(first))

    def body_or(self):
        first = self.ts.current
        items = [self.body_and()]
        while self.ts.current.is_word("or"):
            self.ts.advance()
            items.append(self.body_and())
        if len(items) == 1:
            return items[0]
        return ast.Or(tuple(items), self.span_from(first))

    def body_and(self):
        first = self.ts.current
        items = [self.body_prim()]
        while self.ts.current.is_word("and"):
            self.ts.advance()
            items.append(self.body_prim())
        if len(items) == 1:
            return items[0]
        return ast.And(tuple(items), self.span_from(first))

    def body_prim(self):
        if self.ts.current.is_punct("("):
            self.ts.advance()
            inner = self.body_or()
            self.expect_punct(")", "to close parenthesised expression")
            return inner
        first = self.ts.current
        x = self.ident("variable").value
        if self.ts.current.is_punct("->"):
            self.ts.advance()
            y = self.ident("variable").value
            negated = self.optional_not()
            self.expect_word("in")
            rel = self.ident("relation name").value
            return ast.Membership(x, y, rel, negated, self.span_from(first))
        negated = self.optional_not()
        if not self.ts.current.is_word("in"):
            self.error(f"expected '->' or 'in' after variable, found {self.describe(self.ts.current)}")
        self.ts.advance()
        sig = self.ident("signature name").value
        return ast.TypeTest(x, sig, negated, self.span_from(first))

    def optional_not(self):
        if self.ts.current.is_word("not"):
            self.ts.advance()
            return True
        return False

    def head_or(self):
        first = self.ts.current
        items = [self.head_and()]
        while self.ts.current.is_word("or"):
            self.ts.advance()
            items.append(self.head_and())
        if len(items) == 1:
            return items[0]
        return ast.Or(tuple(items), self.span_from(first))

    def head_and(self):
        first = self.ts.current
        items = [self.head_prim()]
        while self.ts.current.is_word("and"):
            self.ts.advance()
            items.append(self.head_prim())
        if len(items) == 1:
            return items[0]
        return ast.And(tuple(items), self.span_from(first))

    def head_prim(self):
        first = self.ts.current
        if first.is_punct("("):
            self.ts.advance()
            inner = self.head_or()
            self.expect_punct(")", "to close parenthesised head")
            return inner
        if first.is_word("none"):
            self.ts.advance()
            return ast.Deny(self.span_from(first))
        if first.is_word("some"):
            self.ts.advance()
            var = self.ident("variable name").value
            self.expect_punct(":")
            sig = self.ident("signature name").value
            self.expect_punct("|")
            inner = self.head_prim()
            return ast.Exists(var, sig, inner, self.span_from(first))
        x = self.ident("variable").value
        if self.ts.current.is_punct("="):
            self.ts.advance()
            y = self.ident("variable").value
            return ast.MustEqual(x, y, self.span_from(first))
        self.expect_punct("->", "in head")
        y = self.ident("variable").value
        negated = self.optional_not()
        self.expect_word("in")
        rel = self.ident("relation name").value
        if negated:
            return ast.Forbid(x, y, rel, self.span_from(first))
        return ast.Derive(x, y, rel, self.span_from(first))


def parse_spec(text, file_name="<spec>"):
    """Parse spec source into a :class:`~tracereason.dsl.ast.SpecAst`.

    Raises :class:`SpecSyntaxError` listing every lexical and syntax error;
    the parser recovers at the next top-level declaration so one mistake
    does not hide the rest.
    """
    p = _Parser(text, file_name)
    tree = p.parse()
    if p.errors:
        raise SpecSyntaxError(sorted(p.errors, key=lambda e: e.span))
    return tree
