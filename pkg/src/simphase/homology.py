"""Exact rank and homology dimensions over random prime fields.

dim H_d is the column-rank defect of the boundary operator, and the
Laplacian kernel is its row-rank defect; both come from one rank.  Ranks
are computed modulo random 31-bit primes: entries are +-1, a mod-p rank
never exceeds the rational rank, and agreement between independent primes
makes an undercount vanishingly unlikely.  The rank-nullity bookkeeping

    dim H_d - dim ker L = |F_d| - C(n, d)

then holds exactly by construction and is asserted per sample in tests.

The (d-1)-st boundary operator of the *full* skeleton has known rank
C(n-1, d-1) (the full k-skeleton boundary has rank C(n-1, k)); the
(d-1)-st Betti number uses that closed form rather than a second
elimination.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._elim import rank_sparse_mod_p
from .complexes import Complex, SignedIncidence, boundary_matrix

_MR_BASES = (2, 3, 5, 7)  # deterministic Miller-Rabin below 3.2e9


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_primes(count: int, rng: np.random.Generator | None = None,
                  exclude=()) -> list[int]:
    """Distinct random 31-bit primes."""
    rng = rng if rng is not None else np.random.default_rng()
    primes: list[int] = []
    seen = set(exclude)
    while len(primes) < count:
        cand = int(rng.integers(2**30, 2**31)) | 1
        while not _is_prime(cand):
            cand += 2
        if cand < 2**31 and cand not in seen:
            primes.append(cand)
            seen.add(cand)
    return primes


@dataclass(frozen=True)
class RankCertificate:
    """Rank reported as the max over several prime moduli."""

    rank: int
    primes: tuple[int, ...]
    agreed: bool


@dataclass(frozen=True)
class HomologyProfile:
    """Homology/kernel dimensions of one complex, from a single rank."""

    dim_hd: int
    dim_hd1: int
    dim_ker_l: int
    n_faces_d: int
    simplex_boundary_count: int


def rank_mod_p(m: SignedIncidence, p: int) -> int:
    """Rank of the signed incidence matrix over GF(p).

    Sparse-aware: unit rows are peeled combinatorially, the residual core
    is eliminated densely with partial pivoting by column nonzero count.
    """
    p = int(p)
    if p <= 2 or p >= 2**31:
        raise ValueError("p must be an odd prime fitting in 31 bits")
    return rank_sparse_mod_p(m.row_index, m.col_index, m.sign,
                             m.rows, m.cols, p)


def rank_q(m: SignedIncidence,
           rng: np.random.Generator | None = None) -> RankCertificate:
    """Rational rank via agreement of ranks under random 31-bit primes.

    Two primes to start; on disagreement more are drawn (up to 5 total)
    and the maximum rank seen is reported.
    """
    rng = rng if rng is not None else np.random.default_rng()
    primes = random_primes(2, rng)
    ranks = [rank_mod_p(m, p) for p in primes]
    while len(set(ranks)) > 1 and len(primes) < 5:
        extra = random_primes(1, rng, exclude=primes)[0]
        primes.append(extra)
        ranks.append(rank_mod_p(m, extra))
    return RankCertificate(rank=max(ranks), primes=tuple(primes),
                           agreed=len(set(ranks)) == 1)


def simplex_boundary_count(y: Complex) -> int:
    """Number of (d+2)-vertex sets all of whose d-faces are present.

    Enumerates only over supports of existing faces (face + one extra
    vertex), never over all C(n, d+2) subsets.
    """
    face_set = set(y.faces)
    seen: set[tuple[int, ...]] = set()
    count = 0
    for f in y.faces:
        fs = set(f)
        for w in range(y.n):
            if w in fs:
                continue
            s = tuple(sorted(f + (w,)))
            if s in seen:
                continue
            seen.add(s)
            if all(s[:i] + s[i + 1:] in face_set for i in range(len(s))):
                count += 1
    return count


def independent_simplex_boundaries(y: Complex,
                                   p: int = 2_147_483_647) -> int:
    """Rank of the set of full simplex-boundary cycles supported in y."""
    face_set = {f: i for i, f in enumerate(y.faces)}
    seen: set[tuple[int, ...]] = set()
    cols: list[list[tuple[int, int]]] = []
    for f in y.faces:
        fs = set(f)
        for w in range(y.n):
            if w in fs:
                continue
            s = tuple(sorted(f + (w,)))
            if s in seen:
                continue
            seen.add(s)
            subs = [s[:i] + s[i + 1:] for i in range(len(s))]
            if all(sub in face_set for sub in subs):
                cols.append([(face_set[sub], (-1) ** i)
                             for i, sub in enumerate(subs)])
    if not cols:
        return 0
    rows = np.array([r for col in cols for r, _ in col], dtype=np.int64)
    col_idx = np.array([j for j, col in enumerate(cols) for _ in col],
                       dtype=np.int64)
    signs = np.array([s for col in cols for _, s in col], dtype=np.int64)
    return rank_sparse_mod_p(rows, col_idx, signs,
                             len(y.faces), len(cols), p)


def homology_profile(y: Complex,
                     rng: np.random.Generator | None = None) -> HomologyProfile:
    """All dimension statistics derived from rank(boundary of y)."""
    n, d = y.n, y.d
    r = rank_q(boundary_matrix(y), rng).rank
    n_faces = y.n_faces
    n_dm1 = math.comb(n, d)
    return HomologyProfile(
        dim_hd=n_faces - r,
        dim_hd1=math.comb(n - 1, d) - r,
        dim_ker_l=n_dm1 - r,
        n_faces_d=n_faces,
        simplex_boundary_count=simplex_boundary_count(y),
    )


def euler_check(y: Complex,
                profile: HomologyProfile | None = None) -> tuple[int, int]:
    """(beta_{d-1} - beta_d, C(n,d) - rank(full lower boundary) - |F_d|).

    The two sides agree exactly on every complex (rank-nullity); for d=2
    the right side is C(n,2) - (n-1) - |F_2|.
    """
    if profile is None:
        profile = homology_profile(y)
    lhs = profile.dim_hd1 - profile.dim_hd
    rhs = math.comb(y.n, y.d) - math.comb(y.n - 1, y.d - 1) - y.n_faces
    return lhs, rhs


def full_lower_boundary(n: int, d: int) -> SignedIncidence:
    """Boundary matrix of the complete (d-1)-skeleton on n vertices.

    Used by tests to confirm rank C(n-1, d-1); quadratic in C(n, d), so
    keep n small.
    """
    from . import _combinadics as comb

    faces = np.array(list(itertools.combinations(range(n), d)),
                     dtype=np.int64)
    rows_total = comb.n_subsets(n, d - 1)
    parts = []
    for i in range(d):
        parts.append(comb.rank_subsets(np.delete(faces, i, axis=1), n))
    row_index = np.concatenate(parts)
    col_index = np.tile(np.arange(len(faces), dtype=np.int64), d)
    sign = np.concatenate([np.full(len(faces), (-1) ** i, dtype=np.int64)
                           for i in range(d)])
    return SignedIncidence(rows_total, len(faces), row_index, col_index, sign)
