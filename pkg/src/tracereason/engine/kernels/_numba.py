"""numba-compiled join kernels; same contracts as the numpy versions."""

import numpy as np
from numba import njit


@njit(cache=True)
def seed_pairs(bind, c1, c2, adj, mask1, mask2):
    n = adj.shape[0]
    k = 0
    for s in range(n):
        if mask1[s]:
            for t in range(n):
                if adj[s, t] and mask2[t]:
                    k += 1
    m = bind.shape[0]
    out = np.empty((m * k, bind.shape[1]), dtype=np.int32)
    row = 0
    for r in range(m):
        for s in range(n):
            if mask1[s]:
                for t in range(n):
                    if adj[s, t] and mask2[t]:
                        out[row, :] = bind[r, :]
                        out[row, c1] = s
                        out[row, c2] = t
                        row += 1
    return out


@njit(cache=True)
def seed_loops(bind, c, adj, mask):
    n = adj.shape[0]
    k = 0
    for s in range(n):
        if adj[s, s] and mask[s]:
            k += 1
    m = bind.shape[0]
    out = np.empty((m * k, bind.shape[1]), dtype=np.int32)
    row = 0
    for r in range(m):
        for s in range(n):
            if adj[s, s] and mask[s]:
                out[row, :] = bind[r, :]
                out[row, c] = s
                row += 1
    return out


@njit(cache=True)
def extend(bind, cb, cn, adj, mask):
    n = adj.shape[0]
    m = bind.shape[0]
    k = 0
    for r in range(m):
        s = bind[r, cb]
        for t in range(n):
            if adj[s, t] and mask[t]:
                k += 1
    out = np.empty((k, bind.shape[1]), dtype=np.int32)
    row = 0
    for r in range(m):
        s = bind[r, cb]
        for t in range(n):
            if adj[s, t] and mask[t]:
                out[row, :] = bind[r, :]
                out[row, cn] = t
                row += 1
    return out


@njit(cache=True)
def filter_edges(bind, c1, c2, adj):
    m = bind.shape[0]
    keep = np.zeros(m, dtype=np.bool_)
    k = 0
    for r in range(m):
        if adj[bind[r, c1], bind[r, c2]]:
            keep[r] = True
            k += 1
    out = np.empty((k, bind.shape[1]), dtype=np.int32)
    row = 0
    for r in range(m):
        if keep[r]:
            out[row, :] = bind[r, :]
            row += 1
    return out


@njit(cache=True)
def cross(bind, c, mask):
    n = mask.shape[0]
    k = 0
    for t in range(n):
        if mask[t]:
            k += 1
    m = bind.shape[0]
    out = np.empty((m * k, bind.shape[1]), dtype=np.int32)
    row = 0
    for r in range(m):
        for t in range(n):
            if mask[t]:
                out[row, :] = bind[r, :]
                out[row, c] = t
                row += 1
    return out
