"""Gaussian elimination over GF(p) tuned for boundary matrices.

Boundary matrices are extremely sparse (d+1 entries per column), so rank
computations run in two stages: a combinatorial peel of rows with a single
nonzero (each such row pins an independent column and can be deleted with
its column), then dense elimination of the residual core with pivoting by
column nonzero count.  The dense kernel is numba-compiled and keeps exact
row/column nonzero counts so sparse phases stay cheap.

All arithmetic is int64; with p < 2^31 every intermediate product fits.
"""

from __future__ import annotations

from collections import deque

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _inv_mod(a: np.int64, p: np.int64) -> np.int64:
    """Modular inverse by Fermat exponentiation (p prime)."""
    result = np.int64(1)
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True, nogil=True)
def eliminate_mod_p(A, p, n_pivot_cols):
    """In-place row reduction of int64 matrix A over GF(p).

    Pivots are restricted to the first ``n_pivot_cols`` columns and chosen
    by minimal column nonzero count (ties to the sparsest row).  Returns
    (rank, row_active): rows still active at the end were never used as
    pivots and are zero on every pivot-eligible column, so with an
    identity block appended they expose the left null space.
    """
    m, w = A.shape
    npc = n_pivot_cols
    col_cnt = np.zeros(npc, dtype=np.int64)
    row_cnt = np.zeros(m, dtype=np.int64)
    for i in range(m):
        for j in range(w):
            if A[i, j] != 0:
                row_cnt[i] += 1
                if j < npc:
                    col_cnt[j] += 1
    row_active = np.ones(m, dtype=np.uint8)
    col_done = np.zeros(npc, dtype=np.uint8)
    pivot_nz = np.empty(w, dtype=np.int64)
    rank = 0
    big = np.int64(1) << 62
    while True:
        best_j = -1
        best = big
        for j in range(npc):
            if col_done[j] == 0 and 0 < col_cnt[j] < best:
                best = col_cnt[j]
                best_j = j
        if best_j < 0:
            break
        j = best_j
        pr = -1
        bestr = big
        for i in range(m):
            if row_active[i] == 1 and A[i, j] != 0 and row_cnt[i] < bestr:
                bestr = row_cnt[i]
                pr = i
        inv = _inv_mod(A[pr, j], p)
        nnz = 0
        for jj in range(w):
            vv = A[pr, jj]
            if vv != 0:
                A[pr, jj] = (vv * inv) % p
                pivot_nz[nnz] = jj
                nnz += 1
        for i in range(m):
            if row_active[i] == 0 or i == pr:
                continue
            f = A[i, j]
            if f == 0:
                continue
            for kk in range(nnz):
                jj = pivot_nz[kk]
                old = A[i, jj]
                nv = (old - f * A[pr, jj]) % p
                if nv != old:
                    A[i, jj] = nv
                    if old == 0:
                        row_cnt[i] += 1
                        if jj < npc and col_done[jj] == 0:
                            col_cnt[jj] += 1
                    elif nv == 0:
                        row_cnt[i] -= 1
                        if jj < npc and col_done[jj] == 0:
                            col_cnt[jj] -= 1
        row_active[pr] = 0
        col_done[j] = 1
        for kk in range(nnz):
            jj = pivot_nz[kk]
            if jj < npc and col_done[jj] == 0:
                col_cnt[jj] -= 1
        rank += 1
    return rank, row_active


def peel_unit_rows(row_index, col_index, n_rows, n_cols):
    """Repeatedly delete rows with exactly one live entry plus their column.

    Each deleted (row, column) pair contributes exactly 1 to the rank (the
    row forces its column into any basis), so

        rank(M) = n_peeled + rank(core).

    Returns (n_peeled, row_alive, col_alive) boolean masks of the core.
    """
    row_entries: list[list[int]] = [[] for _ in range(n_rows)]
    col_entries: list[list[int]] = [[] for _ in range(n_cols)]
    for r, c in zip(row_index, col_index):
        row_entries[r].append(int(c))
        col_entries[c].append(int(r))
    row_alive = np.ones(n_rows, dtype=bool)
    col_alive = np.ones(n_cols, dtype=bool)
    row_deg = np.zeros(n_rows, dtype=np.int64)
    np.add.at(row_deg, row_index, 1)
    queue = deque(np.flatnonzero(row_deg == 1).tolist())
    peeled = 0
    while queue:
        r = queue.popleft()
        if not row_alive[r] or row_deg[r] != 1:
            continue
        alive_cols = [c for c in row_entries[r] if col_alive[c]]
        c = alive_cols[0]
        row_alive[r] = False
        col_alive[c] = False
        peeled += 1
        for r2 in col_entries[c]:
            if row_alive[r2]:
                row_deg[r2] -= 1
                if row_deg[r2] == 1:
                    queue.append(r2)
    return peeled, row_alive, col_alive


def rank_sparse_mod_p(row_index, col_index, sign, n_rows, n_cols, p) -> int:
    """Rank over GF(p) of the sparse (row, col, sign) matrix: peel + core."""
    if n_cols == 0 or len(row_index) == 0:
        return 0
    peeled, row_alive, col_alive = peel_unit_rows(
        row_index, col_index, n_rows, n_cols)
    keep = row_alive[row_index] & col_alive[col_index]
    if not np.any(keep):
        return peeled
    row_map = -np.ones(n_rows, dtype=np.int64)
    row_map[np.flatnonzero(row_alive)] = np.arange(int(row_alive.sum()))
    col_map = -np.ones(n_cols, dtype=np.int64)
    col_map[np.flatnonzero(col_alive)] = np.arange(int(col_alive.sum()))
    core = np.zeros((int(row_alive.sum()), int(col_alive.sum())),
                    dtype=np.int64)
    core[row_map[row_index[keep]], col_map[col_index[keep]]] = sign[keep] % p
    rank_core, _ = eliminate_mod_p(core, np.int64(p), core.shape[1])
    return peeled + int(rank_core)


def left_null_basis(dense, p) -> np.ndarray:
    """Basis of the left null space of ``dense`` over GF(p), rows stacked.

    Eliminates [M | I] with pivots confined to the M block; rows whose M
    part reduced to zero carry the null combinations in the I part.
    """
    m = dense.shape[0]
    aug = np.concatenate(
        [dense % p, np.eye(m, dtype=np.int64)], axis=1)
    _, row_active = eliminate_mod_p(aug, np.int64(p), dense.shape[1])
    return aug[row_active.astype(bool), dense.shape[1]:]


_HYPERTREE_PRIME = np.int64(2_147_483_647)


@njit(cache=True, nogil=True)
def _basis_filter(rows, signs, n_rows, target, p):
    n_cand, k = rows.shape
    basis = np.zeros((target, n_rows), dtype=np.int64)
    piv = np.empty(target, dtype=np.int64)
    keep = np.zeros(n_cand, dtype=np.uint8)
    v = np.zeros(n_rows, dtype=np.int64)
    rank = 0
    for i in range(n_cand):
        if rank == target:
            break
        for j in range(k):
            v[rows[i, j]] = signs[j] % p
        for b in range(rank):
            f = v[piv[b]]
            if f != 0:
                for r in range(n_rows):
                    bv = basis[b, r]
                    if bv != 0:
                        v[r] = (v[r] - f * bv) % p
        pr = -1
        for r in range(n_rows):
            if v[r] != 0:
                pr = r
                break
        if pr >= 0:
            inv = _inv_mod(v[pr], p)
            for r in range(n_rows):
                if v[r] != 0:
                    basis[rank, r] = (v[r] * inv) % p
            piv[rank] = pr
            rank += 1
            keep[i] = 1
        for r in range(n_rows):
            v[r] = 0
    return keep


def incremental_basis_filter(rows, signs, n_rows, target) -> np.ndarray:
    """Greedy independent-column filter used by the hypertree process.

    ``rows[i]`` holds the row indices of candidate column i (signs shared
    across candidates).  Independence is tested over a fixed prime field;
    a column accepted mod p is independent over Q as well, and the run
    stops once ``target`` (the full column-space rank) is reached.
    """
    keep = _basis_filter(
        np.ascontiguousarray(rows, dtype=np.int64),
        np.ascontiguousarray(signs, dtype=np.int64),
        np.int64(n_rows), np.int64(target), _HYPERTREE_PRIME)
    return keep.astype(bool)
