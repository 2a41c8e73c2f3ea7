"""Pretty-printer for spec syntax trees; output re-parses to an equal tree."""

from __future__ import annotations

from . import ast


def _expr(e, top=True):
    if isinstance(e, ast.Membership):
        neg = " not" if e.negated else ""
        return f"{e.src}->{e.dst}{neg} in {e.relation}"
    if isinstance(e, ast.TypeTest):
        neg = " not" if e.negated else ""
        return f"{e.var}{neg} in {e.sig}"
    if isinstance(e, ast.Derive):
        return f"{e.src}->{e.dst} in {e.relation}"
    if isinstance(e, ast.Forbid):
        return f"{e.src}->{e.dst} not in {e.relation}"
    if isinstance(e, ast.MustEqual):
        return f"{e.left} = {e.right}"
    if isinstance(e, ast.Deny):
        return "none"
    if isinstance(e, ast.Exists):
        return f"(some {e.var}: {e.sig} | {_expr(e.body, top=False)})"
    if isinstance(e, (ast.And, ast.Or)):
        op = " and " if isinstance(e, ast.And) else " or "
        text = op.join(_expr(i, top=False) for i in e.items)
        return text if top else f"({text})"
    raise TypeError(f"cannot print {e!r}")


def format_formula(f):
    if isinstance(f, ast.Macro):
        return f"{f.kind}[{', '.join(f.relations)}]"
    decls = ", ".join(f"{', '.join(d.names)}: {d.sig}" for d in f.decls)
    return f"{f.quantifier} {decls} | {_expr(f.body)} implies {_expr(f.head)}"


def format_sig(s):
    head = "abstract sig" if s.is_abstract else "sig"
    text = f"{head} {s.name}"
    if s.parent:
        text += f" {s.parent_keyword or 'extends'} {s.parent}"
    if s.fields:
        body = ",\n".join(f"  {f.name}: set {f.target}" for f in s.fields)
        text += " {\n" + body + "\n}"
    else:
        text += " {}"
    if s.location_kind:
        text += f" @location({s.location_kind})"
    return text


def format_fact(f):
    head = f"fact {f.name}" if f.name else "fact"
    lines = [head + " {"]
    lines.extend(f"  {format_formula(x)}" for x in f.body)
    lines.append("}")
    return "\n".join(lines)


def format_spec(tree):
    """Render a SpecAst as source text, keeping declaration order."""
    order = tree.order or (
        [("sig", i) for i in range(len(tree.sig_decls))]
        + [("fact", i) for i in range(len(tree.fact_decls))]
    )
    blocks = []
    for kind, i in order:
        if kind == "sig":
            blocks.append(format_sig(tree.sig_decls[i]))
        else:
            blocks.append(format_fact(tree.fact_decls[i]))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
