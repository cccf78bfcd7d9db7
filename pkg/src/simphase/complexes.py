"""n-vertex d-complexes with full (d-1)-skeleton.

A complex is its set of d-faces; every (d-1)-face is implicitly present.
Faces are sorted integer tuples carrying a global lexicographic index
(combinadic rank), which fixes a canonical orientation: all sign
bookkeeping in the boundary operator reduces to (-1)^i.

Provides the independent-faces sampler (geometric index jumps, so cost is
O(#faces) rather than O(C(n,d+1))), the signed boundary matrix, d-collapse
peeling with a FIFO exposed-face queue, the random hypertree process, and
a line-oriented text serialization.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _combinadics as comb
from .errors import InvalidProbability


@dataclass(frozen=True)
class Complex:
    """An n-vertex d-complex, stored as its lex-sorted tuple of d-faces."""

    n: int
    d: int
    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.d != int(self.d) or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d!r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        canon = tuple(sorted({tuple(int(v) for v in f) for f in self.faces}))
        for f in canon:
            if len(f) != self.d + 1:
                raise ValueError(f"face {f} does not have d+1 = {self.d+1} vertices")
            if any(f[i] >= f[i + 1] for i in range(self.d)):
                raise ValueError(f"face {f} is not strictly increasing")
            if f[0] < 0 or f[-1] >= self.n:
                raise ValueError(f"face {f} has vertices outside [0, {self.n})")
        object.__setattr__(self, "faces", canon)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def face_array(self) -> np.ndarray:
        """Faces as an (F, d+1) int64 array (lex order)."""
        if not self.faces:
            return np.empty((0, self.d + 1), dtype=np.int64)
        return np.asarray(self.faces, dtype=np.int64)

    def face_ranks(self) -> np.ndarray:
        """Global lexicographic index of each face."""
        return comb.rank_subsets(self.face_array(), self.n)

    def with_face(self, face) -> "Complex":
        """New complex with one extra d-face."""
        return Complex(self.n, self.d, self.faces + (tuple(face),))


@dataclass(frozen=True)
class SignedIncidence:
    """Sparse boundary operator: C(n,d) rows of (d-1)-faces by F columns.

    Row/column orderings are lexicographic over vertex tuples; column j for
    face (v_0 < ... < v_d) holds (-1)^i in the row of the subface omitting
    v_i.  Entries are parallel (row, col, sign) arrays.
    """

    rows: int
    cols: int
    row_index: np.ndarray = field(repr=False)
    col_index: np.ndarray = field(repr=False)
    sign: np.ndarray = field(repr=False)

    @property
    def nnz(self) -> int:
        return len(self.row_index)

    def entries(self):
        """Iterate (row, col, sign) triples."""
        for r, c, s in zip(self.row_index, self.col_index, self.sign):
            yield int(r), int(c), int(s)

    def to_dense(self, p: int | None = None) -> np.ndarray:
        """Dense int64 matrix; entries reduced mod p when p is given."""
        m = np.zeros((self.rows, self.cols), dtype=np.int64)
        m[self.row_index, self.col_index] = self.sign
        if p is not None:
            m %= p
        return m


@dataclass(frozen=True)
class CollapseResult:
    """Outcome of exhaustive d-collapsing."""

    core: Complex
    removed_pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    covered_remaining: int


def sample(n: int, d: int, c: float, seed: int) -> Complex:
    """Draw a complex with each d-face present independently with prob c/n.

    Deterministic per seed.  The sampler walks the C(n, d+1) lex indices
    with geometric jumps, so only included faces are ever materialized.
    """
    if d != int(d) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    if n < d + 1:
        raise ValueError(f"need n >= d+1 = {d+1} vertices, got {n}")
    if not (0.0 < c <= n):
        raise InvalidProbability(f"need 0 < c <= n for p = c/n, got c = {c}")
    p = c / n
    total = comb.n_subsets(n, d + 1)
    rng = np.random.default_rng(seed)
    if p >= 1.0:
        idx = np.arange(total, dtype=np.int64)
    else:
        log_q = math.log1p(-p)
        picked: list[np.ndarray] = []
        cursor = -1
        batch = max(64, int(total * p + 6.0 * math.sqrt(total * p) + 16))
        while cursor < total:
            u = rng.random(batch)
            jumps = np.floor(np.log1p(-u) / log_q).astype(np.int64) + 1
            pos = cursor + np.cumsum(jumps)
            picked.append(pos)
            cursor = int(pos[-1])
            batch = 1024
        idx = np.concatenate(picked)
        idx = idx[idx < total]
    faces = comb.unrank_subsets(idx, n, d + 1)
    return Complex(n, d, tuple(map(tuple, faces.tolist())))


def boundary_matrix(y: Complex) -> SignedIncidence:
    """Signed incidence matrix of the boundary operator of y."""
    n, d = y.n, y.d
    rows = comb.n_subsets(n, d)
    faces = y.face_array()
    f = len(faces)
    if f == 0:
        e = np.empty(0, dtype=np.int64)
        return SignedIncidence(rows, 0, e, e.copy(), e.copy())
    row_parts = []
    for i in range(d + 1):
        sub = np.delete(faces, i, axis=1)
        row_parts.append(comb.rank_subsets(sub, n))
    row_index = np.concatenate(row_parts)
    col_index = np.tile(np.arange(f, dtype=np.int64), d + 1)
    sign = np.concatenate([
        np.full(f, (-1) ** i, dtype=np.int64) for i in range(d + 1)
    ])
    return SignedIncidence(rows, f, row_index, col_index, sign)


def _subfaces(face: tuple[int, ...]):
    for i in range(len(face)):
        yield face[:i] + face[i + 1:]


def collapse(y: Complex, queue_seed: int | None = None) -> CollapseResult:
    """Exhaustively remove exposed (d-1)-faces with their unique cofaces.

    The exposed-face queue is FIFO, seeded in lexicographic order (so the
    run is deterministic); entries are re-checked at pop time, the standard
    lazy-deletion peeling idiom.  ``queue_seed`` shuffles the processing
    order instead — the residual core is order-independent, and tests use
    this hook to confirm it.
    """
    cofaces: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for f in y.faces:
        for s in _subfaces(f):
            cofaces.setdefault(s, set()).add(f)
    exposed = sorted(s for s, cf in cofaces.items() if len(cf) == 1)
    if queue_seed is not None:
        order = np.random.default_rng(queue_seed).permutation(len(exposed))
        exposed = [exposed[i] for i in order]
    queue = deque(exposed)
    removed_faces: set[tuple[int, ...]] = set()
    removed_pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    while queue:
        tau = queue.popleft()
        cf = cofaces.get(tau)
        if cf is None or len(cf) != 1:
            continue
        sigma = next(iter(cf))
        removed_pairs.append((tau, sigma))
        removed_faces.add(sigma)
        for s in _subfaces(sigma):
            group = cofaces[s]
            group.discard(sigma)
            if not group:
                del cofaces[s]
            elif len(group) == 1:
                queue.append(s)
    core_faces = tuple(f for f in y.faces if f not in removed_faces)
    core = Complex(y.n, y.d, core_faces)
    return CollapseResult(core=core, removed_pairs=tuple(removed_pairs),
                          covered_remaining=len(cofaces))


def spans_only_simplex_boundaries(y: Complex) -> bool:
    """True iff every face lies in a full (d+1)-simplex boundary within y.

    Vacuously true for the empty complex.  Below the homology threshold
    the residual collapse core is, up to finite-size noise, a disjoint
    union of such boundaries; this predicate separates that regime from
    the giant cores appearing above the collapse threshold.
    """
    faces = set(y.faces)
    covered: set[tuple[int, ...]] = set()
    for f in y.faces:
        fs = set(f)
        for w in range(y.n):
            if w in fs:
                continue
            s = tuple(sorted(f + (w,)))
            subs = [s[:i] + s[i + 1:] for i in range(len(s))]
            if all(t in faces for t in subs):
                covered.update(subs)
    return covered == faces


def random_hypertree(n: int, d: int, seed: int) -> Complex:
    """Greedy acyclic complex from a seeded uniform ordering of all d-faces.

    Scans the faces in random order and keeps each one whose boundary
    column is linearly independent of the kept ones; ends with exactly
    C(n-1, d) faces, whose columns form a basis of the full column space.
    """
    from ._elim import incremental_basis_filter  # deferred: numba compile cost

    if d != int(d) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    if n < d + 2:
        raise ValueError(f"need n >= d+2, got n = {n}")
    total = comb.n_subsets(n, d + 1)
    rng = np.random.default_rng(seed)
    order = rng.permutation(total).astype(np.int64)
    candidates = comb.unrank_subsets(order, n, d + 1)
    rows = np.empty((total, d + 1), dtype=np.int64)
    for i in range(d + 1):
        rows[:, i] = comb.rank_subsets(np.delete(candidates, i, axis=1), n)
    signs = np.array([(-1) ** i for i in range(d + 1)], dtype=np.int64)
    target = math.comb(n - 1, d)
    kept = incremental_basis_filter(rows, signs, comb.n_subsets(n, d), target)
    faces = tuple(map(tuple, candidates[kept].tolist()))
    assert len(faces) == target
    return Complex(n, d, faces)


def to_text(y: Complex) -> str:
    """Line format: header ``n d``, then one face per line."""
    lines = [f"{y.n} {y.d}"]
    lines.extend(" ".join(str(v) for v in f) for f in y.faces)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Complex:
    """Parse the output of :func:`to_text`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty complex file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"expected header 'n d', got {lines[0]!r}")
    n, d = int(head[0]), int(head[1])
    faces = tuple(tuple(int(v) for v in ln.split()) for ln in lines[1:])
    return Complex(n, d, faces)


def save_complex(y: Complex, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_text(y))


def load_complex(path) -> Complex:
    with open(path) as fh:
        return from_text(fh.read())
