"""Poisson d-trees: sampling, the tree operator, and kernel-mass machinery.

A d-tree is a rooted tree whose odd-depth vertices have exactly d
children; even-depth child counts are iid Poisson(c).  The object of
interest is the kernel mass x_T: the spectral measure at {0} of the
tree's operator with respect to the root.  It satisfies a harmonic
recursion over the root's grandchild subtrees (x = 0 as soon as one
child's d subtrees all carry mass 0), with empty subtrees carrying x = 1.

Three routes to the same number are implemented and cross-checked:

* ``x_recursive`` -- the bottom-up recursion on a truncated tree;
* ``x_oracle``    -- dense eigendecomposition of the tree operator and
                     projection of the root vector onto the kernel;
* ``population_dynamics`` -- a pooled fixed-point iteration on the
  kernel-mass distribution, whose positive-mass fraction converges to a
  fixed point of t = exp(-c(1-t)^d).

Only even-depth vertices are stored; each carries the list of its
odd-children's child groups (d grandchildren per group).  Vertex ids are
BFS order, so children always follow parents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotAFixedPoint, ScaleExceeded

_ORACLE_MAX_VERTICES = 4000
_ORACLE_KERNEL_RTOL = 1e-8


@dataclass(frozen=True)
class DTree:
    """Truncated d-tree over its even-depth vertices.

    ``groups[v][j]`` lists the d even-depth children of the j-th odd child
    of vertex v; vertices at ``truncation_depth`` have no groups and are
    treated as roots of empty subtrees.
    """

    d: int
    truncation_depth: int
    depth: np.ndarray
    groups: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.truncation_depth % 2 or self.truncation_depth < 0:
            raise ValueError("truncation_depth must be a nonnegative even integer")
        depth = np.asarray(self.depth, dtype=np.int64)
        object.__setattr__(self, "depth", depth)
        groups = tuple(tuple(tuple(g) for g in gs) for gs in self.groups)
        object.__setattr__(self, "groups", groups)
        n = len(depth)
        if len(groups) != n or n == 0 or depth[0] != 0:
            raise ValueError("depth/groups mismatch or missing root")
        if np.any(np.diff(depth) < 0):
            raise ValueError("vertex ids must be in BFS (depth-sorted) order")
        for v, gs in enumerate(groups):
            if gs and depth[v] >= self.truncation_depth:
                raise ValueError("children recorded at/below the truncation depth")
            for g in gs:
                if len(g) != self.d:
                    raise ValueError("each odd vertex must have exactly d children")
                for w in g:
                    if not (0 <= w < n) or depth[w] != depth[v] + 2:
                        raise ValueError("child depth inconsistent")

    @property
    def n_vertices(self) -> int:
        return len(self.depth)

    def child_count(self, v: int) -> int:
        return len(self.groups[v])


class PopulationResult(NamedTuple):
    mean_x: float
    p_positive: float


def sample_tree(d: int, c: float, truncation_depth: int, seed: int) -> DTree:
    """Poisson d-tree truncated at an even depth; deterministic per seed."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if c <= 0:
        raise ValueError("c must be positive")
    if truncation_depth % 2 or truncation_depth < 0:
        raise ValueError("truncation_depth must be a nonnegative even integer")
    rng = np.random.default_rng(seed)
    depth = [0]
    groups: list[list[tuple[int, ...]]] = [[]]
    frontier = [0]
    for level in range(0, truncation_depth, 2):
        counts = rng.poisson(c, size=len(frontier))
        next_frontier: list[int] = []
        for v, m in zip(frontier, counts):
            for _ in range(int(m)):
                g = []
                for _ in range(d):
                    w = len(depth)
                    depth.append(level + 2)
                    groups.append([])
                    g.append(w)
                groups[v].append(tuple(g))
                next_frontier.extend(g)
        frontier = next_frontier
    return DTree(d=d, truncation_depth=truncation_depth,
                 depth=np.array(depth, dtype=np.int64),
                 groups=tuple(tuple(gs) for gs in groups))


def depth2_tree(d: int, m: int) -> DTree:
    """The depth-2 tree: a root with m odd children, each with d leaves."""
    depth = [0] + [2] * (m * d)
    groups: list[tuple[tuple[int, ...], ...]] = [tuple(
        tuple(range(1 + j * d, 1 + (j + 1) * d)) for j in range(m))]
    groups += [()] * (m * d)
    return DTree(d=d, truncation_depth=2,
                 depth=np.array(depth, dtype=np.int64), groups=tuple(groups))


def truncate(tree: DTree, depth: int) -> DTree:
    """Restrict to vertices of depth <= ``depth`` (even), clearing leaves."""
    if depth % 2 or depth < 0 or depth > tree.truncation_depth:
        raise ValueError("depth must be even and within the tree's truncation")
    keep = int(np.searchsorted(tree.depth, depth, side="right"))
    groups = tuple(tree.groups[v] if tree.depth[v] < depth else ()
                   for v in range(keep))
    return DTree(d=tree.d, truncation_depth=depth,
                 depth=tree.depth[:keep].copy(), groups=groups)


def tree_operator(tree: DTree) -> np.ndarray:
    """Dense symmetric operator over the even-depth vertices.

    Diagonal entries are bipartite degrees (odd-depth neighbors); two even
    vertices sharing an odd neighbor get entry +1 (the all-plus marking
    is flip-equivalent to any other).
    """
    n = tree.n_vertices
    mat = np.zeros((n, n), dtype=np.float64)
    for v in range(n):
        mat[v, v] = tree.child_count(v) + (1 if v != 0 else 0)
        for g in tree.groups[v]:
            members = (v,) + g
            for a in members:
                for b in members:
                    if a != b:
                        mat[a, b] = 1.0
    return mat


@dataclass(frozen=True)
class KernelMass:
    """Spectral mass at {0} of a tree operator w.r.t. the root vector."""

    x: float

    def __post_init__(self):
        if not -1e-9 <= self.x <= 1 + 1e-9:
            raise ValueError(f"kernel mass outside [0,1]: {self.x}")
        object.__setattr__(self, "x", min(1.0, max(0.0, float(self.x))))


def x_recursive(tree: DTree) -> KernelMass:
    """Bottom-up harmonic recursion; truncation leaves carry x = 1."""
    n = tree.n_vertices
    x = np.ones(n, dtype=np.float64)
    for v in range(n - 1, -1, -1):
        gs = tree.groups[v]
        if not gs:
            continue  # empty subtree: x stays 1
        acc = 0.0
        dead = False
        for g in gs:
            s = 0.0
            for w in g:
                s += x[w]
            if s == 0.0:
                dead = True
                break
            acc += 1.0 / s
        x[v] = 0.0 if dead else 1.0 / (1.0 + acc)
    return KernelMass(float(x[0]))


def x_oracle(tree: DTree) -> KernelMass:
    """Eigendecomposition oracle: squared kernel projection of the root."""
    n = tree.n_vertices
    if n > _ORACLE_MAX_VERTICES:
        raise ScaleExceeded(
            f"oracle limited to {_ORACLE_MAX_VERTICES} vertices, tree has {n}")
    op = tree_operator(tree)
    eigvals, eigvecs = np.linalg.eigh(op)
    scale = float(np.abs(eigvals).max()) if n else 0.0
    kernel = np.abs(eigvals) <= _ORACLE_KERNEL_RTOL * scale
    return KernelMass(float(np.sum(eigvecs[0, kernel] ** 2)))


def population_dynamics(d: int, c: float, pool: int, sweeps: int, seed: int,
                        init: str = "ones") -> PopulationResult:
    """Pooled fixed-point iteration on the kernel-mass distribution.

    Each sweep resamples the whole pool: a new sample draws m ~ Poisson(c)
    groups of d pool members and applies the recursion (0 if any group is
    all-zero, else the harmonic form).  From the all-ones start (default)
    the pool tracks the depth-truncated recursion, so exact zeros never
    appear and the positive fraction stays on the t = 1 branch; the
    all-zeros start probes the other basin, where the positive fraction
    climbs to the smallest fixed point of t = exp(-c(1-t)^d).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if c <= 0:
        raise ValueError("c must be positive")
    if pool < 10_000:
        raise ValueError("pool must be at least 10^4")
    if sweeps < 100:
        raise ValueError("sweeps must be at least 100")
    if init not in ("ones", "zeros"):
        raise ValueError("init must be 'ones' or 'zeros'")
    rng = np.random.default_rng(seed)
    x = np.ones(pool) if init == "ones" else np.zeros(pool)
    for _ in range(sweeps):
        x = population_sweep(x, d, c, rng)
    return PopulationResult(mean_x=float(x.mean()),
                            p_positive=float(np.mean(x > 0.0)))


def population_sweep(x: np.ndarray, d: int, c: float,
                     rng: np.random.Generator) -> np.ndarray:
    """One synchronous pool resampling (one extra recursion level)."""
    pool = len(x)
    m = rng.poisson(c, size=pool)
    total = int(m.sum())
    if total == 0:
        return np.ones(pool)
    idx = rng.integers(0, pool, size=(total, d))
    vals = x[idx]
    gsum = vals.sum(axis=1)
    gdead = gsum == 0.0
    owner = np.repeat(np.arange(pool), m)
    weights = np.where(gdead, 0.0, 1.0 / np.where(gdead, 1.0, gsum))
    acc = np.bincount(owner, weights=weights, minlength=pool)
    killed = np.bincount(owner[gdead], minlength=pool) > 0
    out = 1.0 / (1.0 + acc)
    out[killed] = 0.0
    return out


def expected_kernel_closed_form(d: int, c: float, t: float) -> float:
    """t + c*t(1-t)^d - c/(d+1)*(1 - (1-t)^(d+1)) at a fixed point t.

    Raises NotAFixedPoint unless t solves t = exp(-c(1-t)^d) to 1e-9.
    The maximum of this expression over all fixed points reproduces the
    kernel-mass bound computed independently by the thresholds module.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if c <= 0:
        raise ValueError("c must be positive")
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if abs(t - math.exp(-c * (1.0 - t) ** d)) > 1e-9:
        raise NotAFixedPoint(f"t = {t} does not solve t = exp(-c(1-t)^{d})")
    return (t + c * t * (1.0 - t) ** d
            - c / (d + 1) * (1.0 - (1.0 - t) ** (d + 1)))
