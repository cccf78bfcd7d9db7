"""Exact R-shadow of a complex: faces whose addition creates a new cycle.

A missing face sigma is in the shadow iff its boundary column already
lies in the column space of the boundary operator.  Membership is tested
over a random 31-bit prime: one elimination exposes a left-null basis N
of the boundary matrix (the column space is exactly the null space of
N^T), and each candidate costs a (d+1)-column gather against N instead of
its own elimination.  Dependence mod p can overstate rational dependence
with probability ~1/p, so candidates deemed dependent are re-tested under
a second prime; independence mod p is already certain.

``shadow_naive`` is the deliberately slow oracle (per-candidate rank from
scratch) kept for cross-validation at small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _combinadics as comb
from ._elim import left_null_basis
from .complexes import Complex, SignedIncidence, boundary_matrix
from .errors import ScaleExceeded
from .homology import random_primes, rank_q

_NAIVE_MAX_N = 14
_CHUNK = 4096


@dataclass(frozen=True)
class ShadowReport:
    """Shadow membership plus summary statistics."""

    members: tuple[tuple[int, ...], ...]
    density: float
    boundary_completions: int


def _candidate_rows(y: Complex):
    """Faces not in y, with the boundary-row indices and signs of each."""
    n, d = y.n, y.d
    total = comb.n_subsets(n, d + 1)
    present = np.zeros(total, dtype=bool)
    ranks = y.face_ranks()
    if len(ranks):
        present[ranks] = True
    cand_ranks = np.flatnonzero(~present)
    cand_faces = comb.unrank_subsets(cand_ranks, n, d + 1)
    rows = np.empty((len(cand_ranks), d + 1), dtype=np.int64)
    for i in range(d + 1):
        rows[:, i] = comb.rank_subsets(np.delete(cand_faces, i, axis=1), n)
    signs = np.array([(-1) ** i for i in range(d + 1)], dtype=np.int64)
    return cand_faces, rows, signs


def _dependent_mask(null_basis: np.ndarray, rows: np.ndarray,
                    signs: np.ndarray, p: int) -> np.ndarray:
    """True where the candidate column is annihilated by the null basis."""
    k0, _ = null_basis.shape
    n_cand = rows.shape[0]
    out = np.empty(n_cand, dtype=bool)
    if k0 == 0:
        # full column space mod p, hence full over Q: everything depends
        out[:] = True
        return out
    for lo in range(0, n_cand, _CHUNK):
        hi = min(lo + _CHUNK, n_cand)
        acc = (null_basis[:, rows[lo:hi]] * signs[None, None, :]).sum(axis=2)
        out[lo:hi] = np.all(acc % p == 0, axis=0)
    return out


def _count_boundary_completions(y: Complex, members) -> int:
    """Members whose addition completes a (d+1)-simplex boundary."""
    face_set = set(y.faces)
    count = 0
    for f in members:
        fs = set(f)
        hit = False
        for w in range(y.n):
            if w in fs:
                continue
            s = tuple(sorted(f + (w,)))
            others = (s[:i] + s[i + 1:] for i in range(len(s)))
            if all(o == f or o in face_set for o in others):
                hit = True
                break
        if hit:
            count += 1
    return count


def shadow(y: Complex, rng: np.random.Generator | None = None) -> ShadowReport:
    """Exact shadow via a cached left-null basis and per-candidate gathers."""
    rng = rng if rng is not None else np.random.default_rng()
    cand_faces, rows, signs = _candidate_rows(y)
    total = comb.n_subsets(y.n, y.d + 1)
    if len(cand_faces) == 0:
        return ShadowReport((), 0.0, 0)
    p1, p2 = random_primes(2, rng)
    dense = boundary_matrix(y).to_dense(p1)
    dep = _dependent_mask(left_null_basis(dense, p1), rows, signs, p1)
    if np.any(dep):
        # re-test mod-p1 dependents under an independent prime
        idx = np.flatnonzero(dep)
        dense2 = boundary_matrix(y).to_dense(p2)
        dep2 = _dependent_mask(left_null_basis(dense2, p2),
                               rows[idx], signs, p2)
        final = idx[dep2]
    else:
        final = np.empty(0, dtype=np.int64)
    members = tuple(map(tuple, cand_faces[final].tolist()))
    return ShadowReport(
        members=members,
        density=len(members) / total,
        boundary_completions=_count_boundary_completions(y, members),
    )


def _augment(m: SignedIncidence, rows: np.ndarray,
             signs: np.ndarray) -> SignedIncidence:
    """Append one column with the given row pattern."""
    return SignedIncidence(
        m.rows, m.cols + 1,
        np.concatenate([m.row_index, rows]),
        np.concatenate([m.col_index,
                        np.full(len(rows), m.cols, dtype=np.int64)]),
        np.concatenate([m.sign, signs]),
    )


def shadow_naive(y: Complex,
                 rng: np.random.Generator | None = None) -> ShadowReport:
    """Definition-chasing oracle: recompute dim H_d(Y + sigma) per candidate."""
    if y.n > _NAIVE_MAX_N:
        raise ScaleExceeded(
            f"naive shadow is limited to n <= {_NAIVE_MAX_N}, got n = {y.n}")
    rng = rng if rng is not None else np.random.default_rng()
    cand_faces, rows, signs = _candidate_rows(y)
    total = comb.n_subsets(y.n, y.d + 1)
    base_matrix = boundary_matrix(y)
    base_rank = rank_q(base_matrix, rng).rank
    members = []
    for i, face in enumerate(map(tuple, cand_faces.tolist())):
        aug_rank = rank_q(_augment(base_matrix, rows[i], signs), rng).rank
        # dim H_d grows iff the new column adds no rank
        if aug_rank == base_rank:
            members.append(face)
    return ShadowReport(
        members=tuple(members),
        density=len(members) / total,
        boundary_completions=_count_boundary_completions(y, members),
    )
