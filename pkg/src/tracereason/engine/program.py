"""Integer-indexed form of (model, core, hierarchy) consumed by the kernels.

Locations and relations are numbered in sorted-name order, so comparing
tuple codes ``(rel * n + src) * n + dst`` is the same as comparing
``(relation, source, target)`` name triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dsl import ast

# join-plan step opcodes
SEED_PAIRS = 0
SEED_LOOPS = 1
FORWARD = 2
BACKWARD = 3
FILTER = 4
CROSS = 5


@dataclass(frozen=True)
class Step:
    op: int
    rel: int = -1
    a: int = -1
    b: int = -1
    delta: bool = False


@dataclass
class Query:
    """A rule or constraint compiled against one universe."""

    item: object
    index: int
    var_names: tuple
    var_mask: np.ndarray  # bool[V, n]
    atoms: list  # (rel, v_src, v_dst) for each membership atom, body order
    head_kind: str  # derive | forbid | equal | deny
    head: tuple  # (rel, v1, v2) / (v1, v2) / ()
    empty: bool  # some quantified variable has no candidate location
    bound_vars: tuple  # variables that end up bound by the plan
    plans: dict

    def plan(self, delta_pos=None):
        return self.plans[delta_pos]


def _order_atoms(atoms, first):
    order = [] if first is None else [first]
    bound = set()
    if first is not None:
        bound.update(atoms[first][1:])
    rest = [i for i in range(len(atoms)) if i != first]
    while rest:
        pick = next((i for i in rest if atoms[i][1] in bound or atoms[i][2] in bound), rest[0])
        rest.remove(pick)
        order.append(pick)
        bound.update(atoms[pick][1:])
    return order


def _make_plan(atoms, head_vars, delta_pos):
    steps = []
    bound = set()
    for i in _order_atoms(atoms, delta_pos):
        rel, x, y = atoms[i]
        use_delta = i == delta_pos
        if x in bound and y in bound:
            steps.append(Step(FILTER, rel, x, y, use_delta))
        elif x in bound:
            steps.append(Step(FORWARD, rel, x, y, use_delta))
        elif y in bound:
            steps.append(Step(BACKWARD, rel, y, x, use_delta))
        elif x == y:
            steps.append(Step(SEED_LOOPS, rel, x, x, use_delta))
        else:
            steps.append(Step(SEED_PAIRS, rel, x, y, use_delta))
        bound.update((x, y))
    for v in head_vars:
        if v not in bound:
            steps.append(Step(CROSS, a=v))
            bound.add(v)
    return tuple(steps), tuple(sorted(bound))


class Program:
    def __init__(self, model, core, h):
        self.loc_ids = sorted(loc.id for loc in model.locations)
        self.loc_index = {x: i for i, x in enumerate(self.loc_ids)}
        self.loc_types = {loc.id: loc.sig_type for loc in model.locations}
        self.rel_names = sorted(h.relations)
        self.rel_index = {r: i for i, r in enumerate(self.rel_names)}
        self.n = len(self.loc_ids)
        self.R = len(self.rel_names)
        self.hierarchy = h
        self._sig_masks = {}

        self.dom_mask = np.zeros((max(self.R, 1), self.n), dtype=np.bool_)
        self.rng_mask = np.zeros((max(self.R, 1), self.n), dtype=np.bool_)
        for r, name in enumerate(self.rel_names):
            rel = h.relations[name]
            self.dom_mask[r] = self.sig_mask(rel.domain)
            self.rng_mask[r] = self.sig_mask(rel.range)

        self.rules = [self._compile(item, i) for i, item in enumerate(core.rules)]
        self.constraints = [self._compile(item, i) for i, item in enumerate(core.constraints)]
        self.constraint_by_id = {q.item.id: q for q in self.constraints}

    # -- encoding -------------------------------------------------------------

    def sig_mask(self, sig):
        mask = self._sig_masks.get(sig)
        if mask is None:
            mask = np.zeros(self.n, dtype=np.bool_)
            if sig in self.hierarchy.sigs:
                for loc_id, t in self.loc_types.items():
                    if t in self.hierarchy.sigs and self.hierarchy.is_subtype(t, sig):
                        mask[self.loc_index[loc_id]] = True
            self._sig_masks[sig] = mask
        return mask

    def encode(self, rel, src, dst):
        n = self.n
        return (np.asarray(rel, dtype=np.int64) * n + src) * n + dst

    def encode_key(self, key):
        rel, src, dst = key
        return (self.rel_index[rel] * self.n + self.loc_index[src]) * self.n + self.loc_index[dst]

    def decode(self, code):
        code = int(code)
        n = self.n
        rel, rest = divmod(code, n * n)
        src, dst = divmod(rest, n)
        return (self.rel_names[rel], self.loc_ids[src], self.loc_ids[dst])

    def adjacency(self, keys):
        adj = np.zeros((max(self.R, 1), self.n, self.n), dtype=np.bool_)
        for rel, src, dst in keys:
            adj[self.rel_index[rel], self.loc_index[src], self.loc_index[dst]] = True
        return adj

    # -- compilation ------------------------------------------------------------

    def _compile(self, item, index):
        names = tuple(name for name, _ in item.vars)
        vid = {name: i for i, name in enumerate(names)}
        mask = np.zeros((len(names), self.n), dtype=np.bool_)
        for name, sig in item.vars:
            mask[vid[name]] = self.sig_mask(sig)
        atoms = []
        for atom in item.body:
            if isinstance(atom, ast.TypeTest):
                mask[vid[atom.var]] &= self.sig_mask(atom.sig)
            else:
                atoms.append((self.rel_index[atom.relation], vid[atom.src], vid[atom.dst]))
        head = item.head
        if isinstance(head, ast.Derive):
            kind, hinfo = "derive", (self.rel_index[head.relation], vid[head.src], vid[head.dst])
            head_vars = hinfo[1:]
        elif isinstance(head, ast.Forbid):
            kind, hinfo = "forbid", (self.rel_index[head.relation], vid[head.src], vid[head.dst])
            head_vars = hinfo[1:]
        elif isinstance(head, ast.MustEqual):
            kind, hinfo = "equal", (vid[head.left], vid[head.right])
            head_vars = hinfo
        else:
            kind, hinfo, head_vars = "deny", (), ()
        empty = bool(len(names)) and not mask.any(axis=1).all()
        plans = {}
        bound = ()
        for delta_pos in [None, *range(len(atoms))]:
            plans[delta_pos], bound = _make_plan(atoms, head_vars, delta_pos)
        return Query(item, index, names, mask, atoms, kind, hinfo, empty, bound, plans)


def run_query(q, K, full, full_t, delta=None, delta_t=None, delta_pos=None):
    """All bindings of ``q``'s body; atom ``delta_pos`` reads from ``delta``."""
    V = len(q.var_names)
    if q.empty:
        return np.empty((0, V), dtype=np.int32)
    bind = np.full((1, V), -1, dtype=np.int32)
    for st in q.plan(delta_pos):
        if st.op == CROSS:
            bind = K.cross(bind, st.a, q.var_mask[st.a])
        else:
            src = delta if st.delta else full
            if st.op == FILTER:
                bind = K.filter_edges(bind, st.a, st.b, src[st.rel])
            elif st.op == FORWARD:
                bind = K.extend(bind, st.a, st.b, src[st.rel], q.var_mask[st.b])
            elif st.op == BACKWARD:
                src_t = delta_t if st.delta else full_t
                bind = K.extend(bind, st.a, st.b, src_t[st.rel], q.var_mask[st.b])
            elif st.op == SEED_LOOPS:
                bind = K.seed_loops(bind, st.a, src[st.rel], q.var_mask[st.a])
            else:
                bind = K.seed_pairs(bind, st.a, st.b, src[st.rel], q.var_mask[st.a], q.var_mask[st.b])
        if bind.shape[0] == 0:
            break
    return bind


def premise_codes(prog, q, bind):
    """Tuple codes of the body membership atoms for each binding row (m x k)."""
    if not q.atoms:
        return np.empty((bind.shape[0], 0), dtype=np.int64)
    cols = [prog.encode(rel, bind[:, x], bind[:, y]) for rel, x, y in q.atoms]
    return np.stack(cols, axis=1)


def transpose(adj):
    return np.ascontiguousarray(adj.transpose(0, 2, 1))


def canonical_binding(prog, q, row) -> Optional[tuple]:
    return tuple((q.var_names[v], prog.loc_ids[int(row[v])]) for v in q.bound_vars)
