"""Seeded generators for random specs and models, used by tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .tracemodel import Location, Payload, TraceModel, TraceTuple

MACRO_KINDS = ("irreflexive", "antisymmetric", "symmetric", "transitive", "reflexive",
               "injective", "functional", "excludes")

_RANDOM_SIGS = (("abstract sig", "Node", ""), ("sig", "A", " extends Node"),
                ("sig", "B", " extends Node"), ("sig", "C", " extends A"))
_CONCRETE = ("A", "B", "C")
_PARENTS = {"A": ("A", "Node"), "B": ("B", "Node"), "C": ("C", "A", "Node")}


@dataclass(frozen=True)
class SyntheticCase:
    seed: int
    spec_text: str
    model: TraceModel


def _fits(sig, bound):
    return bound in _PARENTS[sig]


def random_case(seed, max_locations=15, max_relations=4, max_rules=6, compose=False):
    """A small random spec built from property macros plus a random model.

    With ``compose`` an extra composition formula over three relations is
    added, which makes chains across relations possible.
    """
    rng = random.Random(seed)
    n_rel = rng.randint(1, max_relations)
    decl = {}
    for i in range(n_rel):
        decl[f"r{i}"] = (rng.choice(("Node", "A", "B")), rng.choice(("Node", "A", "B", "C")))
    lines = []
    for head, sig, parent in _RANDOM_SIGS:
        fields = ", ".join(f"{r}: set {ran}" for r, (dom, ran) in decl.items() if dom == sig)
        lines.append(f"{head} {sig}{parent} {{{' ' + fields + ' ' if fields else ''}}}")
    facts = []
    for _ in range(rng.randint(0, max_rules)):
        kind = rng.choice(MACRO_KINDS)
        r = rng.choice(list(decl))
        if kind == "excludes":
            facts.append(f"excludes[{r}, {rng.choice(list(decl))}]")
        else:
            facts.append(f"{kind}[{r}]")
    if compose:
        r, s, t = (rng.choice(list(decl)) for _ in range(3))
        facts.append(f"all x: {decl[r][0]}, y: {decl[r][1]}, z: {decl[s][1]} | "
                     f"x->y in {r} and y->z in {s} and x in {decl[t][0]} and z in {decl[t][1]} "
                     f"implies x->z in {t}")
    if facts:
        lines.append("fact Random {\n" + "\n".join(f"  {f}" for f in facts) + "\n}")
    spec = "\n".join(lines) + "\n"

    n = rng.randint(1, max_locations)
    types = {f"l{i:02d}": rng.choice(_CONCRETE) for i in range(n)}
    locations = tuple(Location(x, t) for x, t in types.items())
    tuples = []
    density = rng.uniform(0.02, 0.25)
    for name, (dom, ran) in decl.items():
        for s, ts in types.items():
            for d, td in types.items():
                if _fits(ts, dom) and _fits(td, ran) and rng.random() < density:
                    tuples.append(TraceTuple(name, s, d))
    return SyntheticCase(seed, spec, TraceModel(f"Random{seed}", locations, tuple(tuples)))


SCALE_SPEC = """\
abstract sig TraceLocation {}

abstract sig Artifact extends TraceLocation {
  refines: set Artifact,
  requires: set Artifact,
  contains: set Artifact,
  conflicts: set Artifact,
  equals: set Artifact
}

sig Requirement extends Artifact {} @location(text)
sig HighLevelReq extends Requirement {}
sig LowLevelReq extends Requirement {}

abstract sig Implementation extends Artifact {
  satisfies: set Requirement
}
sig Model extends Implementation {} @location(model)
sig Code extends Implementation {} @location(code)

sig Test extends Artifact {
  verifies: set Requirement
} @location(code)

fact TraceTypeProperties {
  injective[contains]
  irreflexive[refines]
  irreflexive[requires]
  irreflexive[contains]
  antisymmetric[refines]
  antisymmetric[requires]
  antisymmetric[contains]
}

fact ConflictsPropagation {
  all a, b, c: Artifact | (a->b in refines or a->b in requires or a->b in contains) and b->c in conflicts implies a->c in conflicts
}

fact RequiresComposition {
  all a, b, c: Artifact | (a->b in refines or a->b in requires or a->b in contains) and b->c in requires implies a->c in requires
  all a, b, c: Artifact | a->b in requires and (b->c in refines or b->c in requires or b->c in contains) implies a->c in requires
}

fact SatisfiesViaRefines {
  all i: Implementation, a, b: Requirement | i->a in satisfies and a->b in refines implies i->b in satisfies
  all a, b: Implementation, r: Requirement | a->b in refines and b->r in satisfies implies a->r in satisfies
}

fact RequiresExcludesConflicts {
  excludes[requires, conflicts]
}

fact ConflictsSymmetric {
  symmetric[conflicts]
}

fact ContainsTransitive {
  transitive[contains]
}

fact RefinesTransitive {
  transitive[refines]
}

fact EqualsEquivalence {
  symmetric[equals]
  transitive[equals]
}

fact EqualsSubstitution {
  all a, b, c: Artifact | a->b in equals and b->c in requires implies a->c in requires
}

fact VerifiesViaRefines {
  all t: Test, a, b: Requirement | t->a in verifies and a->b in refines implies t->b in verifies
}
"""

_SCALE_TYPES = (("HighLevelReq", 30), ("LowLevelReq", 45), ("Code", 25), ("Model", 10), ("Test", 15))
_SCALE_RELS = {
    # relation -> (source types, target types, keep source index below target index)
    "refines": (("HighLevelReq", "LowLevelReq", "Code", "Model"), ("HighLevelReq", "LowLevelReq", "Code", "Model"), True),
    "requires": (("HighLevelReq", "LowLevelReq"), ("HighLevelReq", "LowLevelReq"), True),
    "contains": (("HighLevelReq", "LowLevelReq", "Code"), ("HighLevelReq", "LowLevelReq", "Code"), True),
    "conflicts": (("LowLevelReq",), ("LowLevelReq",), True),
    "equals": (("Code", "Model"), ("Code", "Model"), True),
    "satisfies": (("Code", "Model"), ("HighLevelReq", "LowLevelReq"), False),
    "verifies": (("Test",), ("HighLevelReq", "LowLevelReq"), False),
}
_SCALE_WEIGHTS = {"refines": 25, "requires": 25, "contains": 15, "conflicts": 5, "equals": 8,
                  "satisfies": 40, "verifies": 20}


def _payload(kind, i):
    if kind == "text":
        return Payload(resource=f"reqs/doc{i % 4}.txt", offset=i * 40, length=40)
    if kind == "model":
        return Payload(resource="design.slx", element=f"block{i}")
    return Payload(resource=f"src/mod{i % 7}.c", offset=i * 100, length=60)


def scale_case(seed=0, n_assigned=138):
    """Industrial-size case: 125 locations, ``n_assigned`` tuples, 7 trace types, 11 facts."""
    rng = random.Random(seed)
    kinds = {"HighLevelReq": "text", "LowLevelReq": "text", "Code": "code", "Model": "model", "Test": "code"}
    locations = []
    for sig, count in _SCALE_TYPES:
        for _ in range(count):
            i = len(locations)
            locations.append(Location(f"e{i:03d}", sig, _payload(kinds[sig], i)))
    by_type = {}
    for i, loc in enumerate(locations):
        by_type.setdefault(loc.sig_type, []).append(i)
    rels = sorted(_SCALE_WEIGHTS)
    weights = [_SCALE_WEIGHTS[r] for r in rels]
    chosen = set()
    while len(chosen) < n_assigned:
        rel = rng.choices(rels, weights)[0]
        srcs, dsts, ordered = _SCALE_RELS[rel]
        s = rng.choice(by_type[rng.choice(srcs)])
        d = rng.choice(by_type[rng.choice(dsts)])
        if s == d or (ordered and s > d):
            continue
        chosen.add((rel, locations[s].id, locations[d].id))
    tuples = tuple(TraceTuple(*k) for k in sorted(chosen))
    return SyntheticCase(seed, SCALE_SPEC, TraceModel("Scale", tuple(locations), tuples))
