"""Lower a SpecAst to a CoreSpec.

Disjunctive bodies are expanded to DNF, one core item per disjunct (and per
conjunct of the head). Property macros expand to fixed rule/constraint
templates. Item ids are ``<fact>/<formula>#<disjunct>`` where ``<formula>``
is the 1-based formula index or the macro text.
"""

from __future__ import annotations

import itertools

from ..spans import SpecError, SpecSemanticError
from . import ast
from .core import Constraint, CoreSpec, RelationSig, Rule


def dnf(expr):
    """Disjunctive normal form of a body expression as a list of atom tuples."""
    if isinstance(expr, ast.Or):
        out = []
        for item in expr.items:
            out.extend(dnf(item))
        return out
    if isinstance(expr, ast.And):
        parts = [dnf(item) for item in expr.items]
        return [tuple(itertools.chain.from_iterable(combo)) for combo in itertools.product(*parts)]
    return [(expr,)]


def _iter_atoms(expr):
    if isinstance(expr, (ast.And, ast.Or)):
        for item in expr.items:
            yield from _iter_atoms(item)
    else:
        yield expr


class _Lowering:
    def __init__(self, tree):
        self.tree = tree
        self.errors = []
        self.relations = {}
        self.sig_names = {s.name for s in tree.sig_decls}
        for s in tree.sig_decls:
            for f in s.fields:
                self.relations.setdefault(f.name, RelationSig(f.name, s.name, f.target, f.span))
        self.rules = []
        self.constraints = []

    def err(self, span, message):
        self.errors.append(SpecError(span, message))

    def run(self):
        for fact in self.tree.fact_decls:
            for index, formula in enumerate(fact.body, start=1):
                if isinstance(formula, ast.Macro):
                    self.macro(fact.ident, formula)
                else:
                    self.implication(fact.ident, index, formula)
        return CoreSpec(
            sigs=self.tree.sig_decls,
            relations=tuple(self.relations.values()),
            rules=tuple(self.rules),
            constraints=tuple(self.constraints),
        )

    # -- implications ---------------------------------------------------------

    def implication(self, fact_id, index, f):
        ok = True
        if f.quantifier != "all":
            self.err(f.span, f"only universal quantification is supported, found '{f.quantifier}'")
            ok = False
        variables = f.variables
        seen = set()
        for d in f.decls:
            if d.sig not in self.sig_names:
                self.err(d.span, f"unknown signature '{d.sig}'")
                ok = False
            for name in d.names:
                if name in seen:
                    self.err(d.span, f"variable '{name}' declared twice")
                    ok = False
                seen.add(name)
        for atom in _iter_atoms(f.body):
            ok &= self.check_atom(atom, seen)
            if atom.negated:
                self.err(atom.span, "negated atom in body is not supported (rules must be Horn)")
                ok = False
        heads = self.flatten_head(f.head)
        if heads is None:
            return
        for h in heads:
            ok &= self.check_head(h, seen)
        if not ok:
            return
        disjuncts = dnf(f.body)
        for k, conj in enumerate(disjuncts):
            for j, head in enumerate(heads):
                suffix = f"#{k}" if len(heads) == 1 else f"#{k}.{j}"
                self.emit(f"{fact_id}/{index}{suffix}", tuple(variables), conj, head, f.span)

    def flatten_head(self, h):
        if isinstance(h, ast.And):
            out = []
            for item in h.items:
                sub = self.flatten_head(item)
                if sub is None:
                    return None
                out.extend(sub)
            return out
        if isinstance(h, ast.Or):
            self.err(h.span, "non-Horn head: disjunction is not allowed in a head")
            return None
        if isinstance(h, ast.Exists):
            self.err(h.span, "non-Horn head: existential quantification is not allowed in a head")
            return None
        return [h]

    def check_var(self, name, span, bound):
        if name not in bound:
            self.err(span, f"unbound variable '{name}'")
            return False
        return True

    def check_rel(self, name, span):
        if name not in self.relations:
            self.err(span, f"unknown relation '{name}'")
            return False
        return True

    def check_atom(self, atom, bound):
        if isinstance(atom, ast.Membership):
            ok = self.check_var(atom.src, atom.span, bound)
            ok &= self.check_var(atom.dst, atom.span, bound)
            return ok & self.check_rel(atom.relation, atom.span)
        ok = self.check_var(atom.var, atom.span, bound)
        if atom.sig not in self.sig_names:
            self.err(atom.span, f"unknown signature '{atom.sig}'")
            ok = False
        return ok

    def check_head(self, h, bound):
        if isinstance(h, (ast.Derive, ast.Forbid)):
            ok = self.check_var(h.src, h.span, bound)
            ok &= self.check_var(h.dst, h.span, bound)
            return ok & self.check_rel(h.relation, h.span)
        if isinstance(h, ast.MustEqual):
            ok = self.check_var(h.left, h.span, bound)
            return ok & self.check_var(h.right, h.span, bound)
        return True

    def emit(self, item_id, variables, body, head, span):
        if isinstance(head, ast.Derive):
            self.rules.append(Rule(item_id, variables, tuple(body), head, span))
        else:
            self.constraints.append(Constraint(item_id, variables, tuple(body), head, span))

    # -- macros ---------------------------------------------------------------

    def macro(self, fact_id, m):
        ok = True
        for r in m.relations:
            if r not in self.relations:
                self.err(m.span, f"unknown relation '{r}' in {m.kind}")
                ok = False
        if not ok:
            return
        rel = self.relations[m.relations[0]]
        name, dom, rng = rel.name, rel.domain, rel.range
        sp = m.span
        base = f"{fact_id}/{m.label}"

        def mem(x, y, r=name):
            return ast.Membership(x, y, r, span=sp)

        kind = m.kind
        if kind == "irreflexive":
            self.emit(base + "#0", (("a", dom),), (mem("a", "a"),), ast.Deny(span=sp), sp)
        elif kind == "antisymmetric":
            self.emit(base + "#0", (("a", dom), ("b", rng)), (mem("a", "b"), mem("b", "a")),
                      ast.MustEqual("a", "b", span=sp), sp)
        elif kind == "symmetric":
            self.emit(base + "#0", (("a", dom), ("b", rng)), (mem("a", "b"),),
                      ast.Derive("b", "a", name, span=sp), sp)
        elif kind == "transitive":
            self.emit(base + "#0", (("a", dom), ("b", rng), ("c", rng)), (mem("a", "b"), mem("b", "c")),
                      ast.Derive("a", "c", name, span=sp), sp)
        elif kind == "reflexive":
            self.emit(base + "#0", (("a", dom),), (ast.TypeTest("a", dom, span=sp),),
                      ast.Derive("a", "a", name, span=sp), sp)
        elif kind == "injective":
            self.emit(base + "#0", (("a", dom), ("b", rng), ("c", dom)), (mem("a", "b"), mem("c", "b")),
                      ast.MustEqual("a", "c", span=sp), sp)
        elif kind == "functional":
            self.emit(base + "#0", (("a", dom), ("b", rng), ("c", rng)), (mem("a", "b"), mem("a", "c")),
                      ast.MustEqual("b", "c", span=sp), sp)
        elif kind == "excludes":
            other = m.relations[1]
            self.emit(base + "#0", (("a", dom), ("b", rng)), (mem("a", "b"), mem("a", "b", other)),
                      ast.Deny(span=sp), sp)
            self.emit(base + "#1", (("a", dom), ("b", rng)), (mem("a", "b"), mem("b", "a", other)),
                      ast.Deny(span=sp), sp)
        else:  # pragma: no cover - parser rejects unknown macros
            self.err(sp, f"unknown property macro '{kind}'")


def desugar(tree):
    """Lower ``tree``; raises :class:`SpecSemanticError` with all problems found."""
    lowering = _Lowering(tree)
    core = lowering.run()
    if lowering.errors:
        raise SpecSemanticError(lowering.errors)
    return core


def load_spec(text, file_name="<spec>"):
    from .parser import parse_spec

    return desugar(parse_spec(text, file_name))
