"""Vectorised numpy join kernels.

Every kernel takes a binding table ``bind`` (int32, one row per partial
variable assignment, -1 for unbound columns) and returns a new table. Row
order is row-major over (input row, candidate), identical to the numba
kernels.
"""

import numpy as np


def seed_pairs(bind, c1, c2, adj, mask1, mask2):
    s, t = np.nonzero(adj & mask1[:, None] & mask2[None, :])
    m = bind.shape[0]
    out = np.repeat(bind, s.size, axis=0)
    out[:, c1] = np.tile(s, m)
    out[:, c2] = np.tile(t, m)
    return out


def seed_loops(bind, c, adj, mask):
    (s,) = np.nonzero(np.diagonal(adj) & mask)
    m = bind.shape[0]
    out = np.repeat(bind, s.size, axis=0)
    out[:, c] = np.tile(s, m)
    return out


def extend(bind, cb, cn, adj, mask):
    r, t = np.nonzero(adj[bind[:, cb]] & mask[None, :])
    out = bind[r]
    out[:, cn] = t
    return out


def filter_edges(bind, c1, c2, adj):
    return bind[adj[bind[:, c1], bind[:, c2]]]


def cross(bind, c, mask):
    (t,) = np.nonzero(mask)
    m = bind.shape[0]
    out = np.repeat(bind, t.size, axis=0)
    out[:, c] = np.tile(t, m)
    return out
