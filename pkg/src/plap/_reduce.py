"""Compiled GF(2) column reduction used by every homology computation."""

from __future__ import annotations

import numpy as np
from numba import njit
from numba.typed import List


@njit(cache=True)
def _symdiff(a, b):
    out = np.empty(a.shape[0] + b.shape[0], np.int64)
    i = 0
    j = 0
    k = 0
    while i < a.shape[0] and j < b.shape[0]:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif a[i] > b[j]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < a.shape[0]:
        out[k] = a[i]
        i += 1
        k += 1
    while j < b.shape[0]:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k]


@njit(cache=True)
def _canonical(row):
    # sort and cancel repeated entries in pairs (mod 2 coefficients)
    s = np.sort(row)
    out = np.empty(s.shape[0], np.int64)
    k = 0
    i = 0
    while i < s.shape[0]:
        if i + 1 < s.shape[0] and s[i] == s[i + 1]:
            i += 2
        else:
            out[k] = s[i]
            k += 1
            i += 1
    return out[:k]


@njit(cache=True)
def reduce_boundary(faces, n_rows, cleared, weight):
    """Left-to-right GF(2) column reduction.

    ``faces[j]`` lists the row positions of column ``j``; columns and rows are
    both in filtration order. Returns ``(lows, parity)``: the pivot row of each
    reduced column (-1 for zero columns) and, per column, the parity of
    ``weight`` summed over the columns that were added into it.
    """
    m = faces.shape[0]
    pivot_of = np.full(n_rows, -1, np.int64)
    lows = np.full(m, -1, np.int64)
    parity = np.zeros(m, np.uint8)
    cols = List()
    empty = np.empty(0, np.int64)
    for j in range(m):
        if cleared[j]:
            cols.append(empty)
            continue
        col = _canonical(faces[j].astype(np.int64))
        par = weight[j]
        while col.shape[0] > 0:
            k = pivot_of[col[-1]]
            if k < 0:
                break
            col = _symdiff(col, cols[k])
            par ^= parity[k]
        cols.append(col)
        parity[j] = par
        if col.shape[0] > 0:
            lows[j] = col[-1]
            pivot_of[col[-1]] = j
    return lows, parity
