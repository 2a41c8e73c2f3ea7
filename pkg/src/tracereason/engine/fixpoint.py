"""Semi-naive least-fixpoint evaluation of the Horn rules."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .program import premise_codes, run_query, transpose

log = logging.getLogger(__name__)


@dataclass
class Fixpoint:
    closure: np.ndarray  # bool[R, n, n], base plus derived
    # code -> (rule index, premise codes), first derivation per derived tuple
    derivations: dict
    order: list  # derived codes in the order they were added
    rounds: int
    warnings: list = field(default_factory=list)


def _select_first(heads, premises):
    """Index of the lexicographically smallest premise row for each distinct head."""
    keys = [premises[:, j] for j in range(premises.shape[1] - 1, -1, -1)]
    order = np.lexsort((*keys, heads))
    _, first = np.unique(heads[order], return_index=True)
    return order[first]


def least_fixpoint(prog, base, K, guard_warnings=True):
    """Close ``base`` (bool[R, n, n]) under ``prog.rules``.

    A tuple first derived in round k gets as its derivation the candidate
    from round k with the smallest (rule index, premise codes); that choice
    does not depend on join order or backend. Derived tuples whose endpoints
    fall outside the head relation's signature are dropped with a warning.
    """
    full = base.copy()
    full_t = transpose(full)
    derivations = {}
    order = []
    warned = set()
    warnings = []
    rounds = 0
    delta = delta_t = None
    n = prog.n
    while True:
        claimed = set()
        new_codes = []
        for q in prog.rules:
            if q.empty:
                continue
            if delta is None:
                parts = [run_query(q, K, full, full_t)]
            elif not q.atoms:
                continue
            else:
                parts = [run_query(q, K, full, full_t, delta, delta_t, i) for i in range(len(q.atoms))]
            bind = np.concatenate(parts) if len(parts) > 1 else parts[0]
            if bind.shape[0] == 0:
                continue
            rel, hx, hy = q.head
            s = bind[:, hx]
            t = bind[:, hy]
            fits = prog.dom_mask[rel, s] & prog.rng_mask[rel, t]
            if not fits.all():
                for code in np.unique(prog.encode(rel, s[~fits], t[~fits])):
                    code = int(code)
                    if code in warned:
                        continue
                    warned.add(code)
                    msg = "rule {} derives ill-typed {}({},{}); skipped".format(q.item.id, *prog.decode(code))
                    warnings.append(msg)
                    if guard_warnings:
                        log.warning(msg)
            keep = fits & ~full[rel, s, t]
            if not keep.any():
                continue
            bind = bind[keep]
            heads = prog.encode(rel, bind[:, hx], bind[:, hy])
            if claimed:
                fresh = np.array([int(c) not in claimed for c in heads], dtype=np.bool_)
                bind, heads = bind[fresh], heads[fresh]
                if heads.size == 0:
                    continue
            prem = premise_codes(prog, q, bind)
            for i in _select_first(heads, prem):
                code = int(heads[i])
                claimed.add(code)
                derivations[code] = (q.index, tuple(int(p) for p in prem[i]))
                new_codes.append(code)
        if not new_codes:
            break
        rounds += 1
        new_codes.sort()
        order.extend(new_codes)
        delta = np.zeros_like(full)
        idx = np.array(new_codes, dtype=np.int64)
        r, rest = np.divmod(idx, n * n)
        a, b = np.divmod(rest, n)
        delta[r, a, b] = True
        full |= delta
        full_t = transpose(full)
        delta_t = transpose(delta)
    return Fixpoint(full, derivations, order, rounds, warnings)
