"""Lexicographic ranking/unranking of k-subsets of {0..n-1}.

Subsets are sorted integer tuples; the global index of a subset is its
position in the lexicographic enumeration of all C(n, k) subsets.  Both
directions are vectorized over many subsets at once: each of the k
positions is resolved with one ``searchsorted`` against a fixed row of
binomial coefficients, so ranking/unranking a whole face list costs
O(k log n) numpy passes rather than a Python loop per face.

All counting is done in int64; inputs where C(n, k) would overflow are
rejected up front.
"""

from __future__ import annotations

import math

import numpy as np

_INT64_MAX = 2**62


def n_subsets(n: int, k: int) -> int:
    """C(n, k), validated to fit comfortably in int64."""
    m = math.comb(n, k)
    if m > _INT64_MAX:
        raise ValueError(f"C({n},{k}) = {m} exceeds the supported index range")
    return m


def comb_row(n: int, k: int) -> np.ndarray:
    """Array [C(0,k), C(1,k), ..., C(n,k)], nondecreasing in the first index."""
    return np.array([math.comb(m, k) for m in range(n + 1)], dtype=np.int64)


def rank_subsets(subsets: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic ranks of an (N, k) array of sorted subsets of {0..n-1}."""
    subsets = np.asarray(subsets, dtype=np.int64)
    if subsets.ndim != 2:
        raise ValueError("expected a 2-d array of subsets")
    N, k = subsets.shape
    n_subsets(n, k)
    ranks = np.zeros(N, dtype=np.int64)
    prev = np.full(N, -1, dtype=np.int64)
    for i in range(k):
        row = comb_row(n, k - i)
        v = subsets[:, i]
        # subsets with the same prefix and i-th element in (prev, v)
        ranks += row[n - 1 - prev] - row[n - v]
        prev = v
    return ranks


def unrank_subsets(ranks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Inverse of :func:`rank_subsets`: (N,) ranks -> (N, k) sorted subsets."""
    r = np.array(ranks, dtype=np.int64, copy=True)
    if np.any(r < 0) or np.any(r >= n_subsets(n, k)):
        raise ValueError("rank out of range")
    N = r.shape[0]
    out = np.empty((N, k), dtype=np.int64)
    prev = np.full(N, -1, dtype=np.int64)
    for i in range(k):
        row = comb_row(n, k - i)
        # v_i is the largest v with (#subsets whose i-th element < v) <= r,
        # i.e. the smallest m = n - v with C(m, k-i) >= C(n-1-prev, k-i) - r.
        target = row[n - 1 - prev] - r
        m = np.searchsorted(row, target, side="left")
        v = n - m
        r -= row[n - 1 - prev] - row[m]
        out[:, i] = v
        prev = v
    return out


def rank_one(subset, n: int) -> int:
    """Lexicographic rank of a single sorted subset."""
    return int(rank_subsets(np.asarray([subset], dtype=np.int64), n)[0])


def unrank_one(rank: int, n: int, k: int) -> tuple:
    """Single-subset inverse of :func:`rank_one`."""
    return tuple(int(v) for v in unrank_subsets(np.asarray([rank]), n, k)[0])
