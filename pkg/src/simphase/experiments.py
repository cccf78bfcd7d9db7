"""Monte Carlo orchestration: threshold tables, density curves, checks.

Each command produces ExperimentRecord rows that regenerate byte-identically
from (kind, params): all randomness flows through the per-record seed, and
CSV projections contain no timestamps.  Theoretical overlay columns are pure
functions of (d, c) delegated to the thresholds module, including the
threshold markers consumed downstream by plotting (which never recomputes
theory).

Column layouts are documented in FORMATS.md at the repository root.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import _combinadics as comb
from . import complexes as cx
from . import dtree
from . import homology as hm
from . import shadow as sh
from . import thresholds as th
from .errors import AtCriticalPoint


@dataclass
class ExperimentRecord:
    """One reproducible measurement: (kind, params) determine stats."""

    kind: str
    params: dict
    stats: dict
    timestamp: float = field(default_factory=time.time)
    tool_version: str = __version__

    def as_row(self) -> dict:
        return {**self.params, **self.stats}


TABLE_COLUMNS = ["d", "c_col", "c_star", "cstar_gap_log10"]
BETTI_COLUMNS = ["d", "n", "c", "seed", "n_faces", "rank_d", "dim_hd",
                 "dim_hd1", "dim_ker_l", "beta_d_emp", "beta_dm1_emp",
                 "beta_d_theory", "beta_dm1_theory",
                 "c_col_theory", "c_star_theory"]
SHADOW_COLUMNS = ["d", "n", "c", "seed", "n_faces", "shadow_size",
                  "shadow_density", "boundary_completions", "shadow_theory",
                  "graph_shadow_theory", "c_col_theory", "c_star_theory"]
COLLAPSE_COLUMNS = ["d", "n", "c", "seed", "n_faces", "core_faces",
                    "removed_pairs", "covered_remaining", "empty_core",
                    "small_core", "c_col_theory", "c_star_theory"]
TREE_COLUMNS = ["d", "c", "depth", "mean_x", "p_positive", "closed_form",
                "kernel_bound"]


def graph_shadow_density(c: float) -> float:
    """Shadow density of the random graph G(n, c/n): (1 - t_c)^2 above c=1.

    The d = 1 comparator of the two-panel shadow figure; the fixed-point
    scan is shared with the d >= 2 machinery but d = 1 is reachable only
    through this function.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    interior = th._interior_fixed_points(1, float(c))
    if not interior:
        return 0.0
    return (1.0 - interior[0]) ** 2


def _shadow_theory(d: int, c: float) -> float:
    try:
        return th.shadow_density(d, c)
    except AtCriticalPoint:
        return float("nan")


def _closed_form_bound(d: int, c: float) -> float:
    """Kernel-mass bound via the dtree code path (dual to thresholds)."""
    return max(dtree.expected_kernel_closed_form(d, c, t)
               for t in th.fixed_points(d, c))


def run_table(d_list) -> list[ExperimentRecord]:
    """Threshold table: c_col(d) and c_star(d) per dimension."""
    records = []
    for d in d_list:
        records.append(ExperimentRecord(
            kind="table",
            params={"d": int(d)},
            stats={"c_col": th.c_col(d), "c_star": th.c_star(d),
                   "cstar_gap_log10": th.cstar_gap_log10(d)},
        ))
    return records


def _fan_out(worker, tasks, jobs):
    """Run worker over tasks, preserving task order in the output."""
    if jobs <= 1:
        return [worker(t) for t in tasks]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def run_betti_curve(d, c_values, n, seeds, seed_base=0, jobs=1):
    """Per-seed homology dimensions along a c grid, with theory overlays."""
    n_dm1 = comb.n_subsets(n, d)
    ccol, cstar = th.c_col(d), th.c_star(d)

    def one(task):
        c, seed = task
        y = cx.sample(n, d, c, seed)
        prof = hm.homology_profile(y)
        g = th.betti_density(d, c)
        return ExperimentRecord(
            kind="betti_curve",
            params={"d": d, "n": n, "c": c, "seed": seed},
            stats={
                "n_faces": y.n_faces,
                "rank_d": y.n_faces - prof.dim_hd,
                "dim_hd": prof.dim_hd,
                "dim_hd1": prof.dim_hd1,
                "dim_ker_l": prof.dim_ker_l,
                "beta_d_emp": prof.dim_hd / n_dm1,
                "beta_dm1_emp": prof.dim_hd1 / n_dm1,
                "beta_d_theory": g,
                "beta_dm1_theory": g + 1.0 - c / (d + 1),
                "c_col_theory": ccol,
                "c_star_theory": cstar,
            },
        )

    tasks = [(float(c), seed_base + j) for c in c_values
             for j in range(seeds)]
    return _fan_out(one, tasks, jobs)


def run_shadow_curve(d, c_values, n, seeds, seed_base=0, jobs=1):
    """Per-seed exact shadow sizes along a c grid, with both theory panels."""
    ccol, cstar = th.c_col(d), th.c_star(d)

    def one(task):
        c, seed = task
        y = cx.sample(n, d, c, seed)
        rep = sh.shadow(y)
        return ExperimentRecord(
            kind="shadow_curve",
            params={"d": d, "n": n, "c": c, "seed": seed},
            stats={
                "n_faces": y.n_faces,
                "shadow_size": len(rep.members),
                "shadow_density": rep.density,
                "boundary_completions": rep.boundary_completions,
                "shadow_theory": _shadow_theory(d, c),
                "graph_shadow_theory": graph_shadow_density(c),
                "c_col_theory": ccol,
                "c_star_theory": cstar,
            },
        )

    tasks = [(float(c), seed_base + j) for c in c_values
             for j in range(seeds)]
    return _fan_out(one, tasks, jobs)


def run_collapse_sweep(d, c_values, n, seeds, seed_base=0, jobs=1):
    """Collapse-core sizes along a c grid (crossover brackets c_col).

    ``empty_core`` is the literal statistic; ``small_core`` additionally
    counts cores that are unions of (d+1)-simplex boundaries, which occur
    at constant rate below the threshold and are discounted by the
    trivial-or-bounded-boundaries dichotomy.
    """
    ccol, cstar = th.c_col(d), th.c_star(d)

    def one(task):
        c, seed = task
        y = cx.sample(n, d, c, seed)
        res = cx.collapse(y)
        return ExperimentRecord(
            kind="collapse_sweep",
            params={"d": d, "n": n, "c": c, "seed": seed},
            stats={
                "n_faces": y.n_faces,
                "core_faces": res.core.n_faces,
                "removed_pairs": len(res.removed_pairs),
                "covered_remaining": res.covered_remaining,
                "empty_core": int(res.core.n_faces == 0),
                "small_core": int(cx.spans_only_simplex_boundaries(res.core)),
                "c_col_theory": ccol,
                "c_star_theory": cstar,
            },
        )

    tasks = [(float(c), seed_base + j) for c in c_values
             for j in range(seeds)]
    return _fan_out(one, tasks, jobs)


def run_tree_spectral(d, c, depths, trees, seed_base=0,
                      pool=None, sweeps=None, init="zeros"):
    """Kernel-mass estimates per truncation depth (plus optional pool run).

    Trees are sampled once at the deepest requested depth and truncated,
    so the per-depth estimates are coupled.  When ``pool``/``sweeps`` are
    given, one extra row reports the population-dynamics estimate with
    depth = 2*sweeps (a sweep deepens the tracked recursion by one level).
    """
    depths = sorted(int(k) for k in depths)
    if not depths or any(k % 2 for k in depths):
        raise ValueError("need a nonempty list of even depths")
    cf = _closed_form_bound(d, c)
    kb = th.kernel_bound(d, c)
    deepest = depths[-1]
    xs = np.empty((len(depths), trees))
    for j in range(trees):
        t_full = dtree.sample_tree(d, c, deepest, seed=seed_base + j)
        for i, k in enumerate(depths):
            xs[i, j] = dtree.x_recursive(dtree.truncate(t_full, k)).x
    records = []
    for i, k in enumerate(depths):
        records.append(ExperimentRecord(
            kind="tree_spectral",
            params={"d": d, "c": float(c), "depth": k},
            stats={"mean_x": float(xs[i].mean()),
                   "p_positive": float(np.mean(xs[i] > 0.0)),
                   "closed_form": cf, "kernel_bound": kb},
        ))
    if pool is not None:
        res = dtree.population_dynamics(d, c, pool=pool, sweeps=sweeps,
                                        seed=seed_base, init=init)
        records.append(ExperimentRecord(
            kind="tree_spectral",
            params={"d": d, "c": float(c), "depth": 2 * sweeps},
            stats={"mean_x": res.mean_x, "p_positive": res.p_positive,
                   "closed_form": cf, "kernel_bound": kb},
        ))
    return records


def _poisson_pmf(c: float, k: int) -> float:
    if c <= 0:
        return float(k == 0)
    return math.exp(-c + k * math.log(c) - math.lgamma(k + 1))


def _multiset_log_prob(c: float, counts: tuple[int, ...]) -> float:
    """log P(sorted tuple of iid Poisson(c) draws equals ``counts``)."""
    k = len(counts)
    if k == 0:
        return 0.0
    log_p = math.lgamma(k + 1)
    mult: dict[int, int] = {}
    for a in counts:
        mult[a] = mult.get(a, 0) + 1
        log_p += -c + a * math.log(c) - math.lgamma(a + 1)
    for m in mult.values():
        log_p -= math.lgamma(m + 1)
    return log_p


def _tv_distance(empirical: dict, theory_prob) -> float:
    """TV between an empirical law and a theoretical pmf over its support."""
    total = sum(empirical.values())
    tv = 0.0
    covered = 0.0
    for key, cnt in empirical.items():
        p = theory_prob(key)
        covered += p
        tv += abs(cnt / total - p)
    return 0.5 * (tv + max(0.0, 1.0 - covered))


def _lwc_null_tv(d, c, radius, samples, rng) -> float:
    """Finite-sample calibration: TV of a same-size draw FROM the tree law.

    The radius-2 type space is large enough that the plug-in TV estimator
    carries an O(sqrt(support/samples)) bias even under perfect agreement;
    comparisons should look at tv_distance relative to this null.
    """
    hist: dict = {}
    for _ in range(samples):
        m = int(rng.poisson(c))
        if radius == 1:
            key = m
        else:
            key = (m, tuple(sorted(rng.poisson(c, size=m * d).tolist())))
        hist[key] = hist.get(key, 0) + 1
    if radius == 1:
        theory = lambda k: _poisson_pmf(c, k)
    else:
        theory = lambda key: _poisson_pmf(c, key[0]) * math.exp(
            _multiset_log_prob(c, key[1]))
    return _tv_distance(hist, theory)


def run_lwc_check(d, c, n, radius, samples, instances=10, seed_base=0):
    """Local-law comparison of neighborhood types against the d-tree law.

    Radius 1 compares the degree of a random (d-1)-face with Poisson(c);
    radius 2 additionally collects the multiset of grandchild counts and
    compares with the product law.  Returns a JSON-ready dict with the
    total-variation distance, a same-size null calibration (``null_tv``),
    and both histograms.
    """
    if radius not in (1, 2):
        raise ValueError("radius must be 1 or 2")
    n_rows = comb.n_subsets(n, d)
    per_instance = max(1, samples // instances)
    hist: dict = {}
    for inst in range(instances):
        y = cx.sample(n, d, c, seed=seed_base + inst)
        b = cx.boundary_matrix(y)
        deg = np.bincount(b.row_index, minlength=n_rows)
        rng = np.random.default_rng([seed_base + inst, 0xFACE5])
        roots = rng.integers(0, n_rows, size=per_instance)
        if radius == 1:
            for r in roots:
                key = int(deg[r])
                hist[key] = hist.get(key, 0) + 1
        else:
            by_row: dict[int, list[int]] = {}
            for r_i, c_i in zip(b.row_index, b.col_index):
                by_row.setdefault(int(r_i), []).append(int(c_i))
            faces = y.face_array()
            for r in roots:
                counts: list[int] = []
                for col in by_row.get(int(r), []):
                    face = faces[col]
                    for i in range(d + 1):
                        sub = np.delete(face, i)
                        rr = int(comb.rank_subsets(sub[None, :], n)[0])
                        if rr != r:
                            counts.append(int(deg[rr]) - 1)
                key = (int(deg[r]), tuple(sorted(counts)))
                hist[key] = hist.get(key, 0) + 1

    if radius == 1:
        theory = lambda k: _poisson_pmf(c, k)
        emp_out = {str(k): v for k, v in sorted(hist.items())}
        theo_out = {str(k): _poisson_pmf(c, k) for k in sorted(hist)}
    else:
        theory = lambda key: _poisson_pmf(c, key[0]) * math.exp(
            _multiset_log_prob(c, key[1]))
        emp_out = {f"{m}|{','.join(map(str, cs))}": v
                   for (m, cs), v in sorted(hist.items())}
        theo_out = {f"{m}|{','.join(map(str, cs))}": theory((m, cs))
                    for (m, cs) in sorted(hist)}
    tv = _tv_distance(hist, theory)
    null_rng = np.random.default_rng([seed_base, 0x7EE])
    null_tv = _lwc_null_tv(d, c, radius, per_instance * instances, null_rng)
    return {
        "kind": "lwc_check",
        "tool_version": __version__,
        "params": {"d": d, "c": c, "n": n, "radius": radius,
                   "samples": int(per_instance * instances),
                   "instances": instances, "seed_base": seed_base},
        "tv_distance": tv,
        "null_tv": null_tv,
        "empirical": emp_out,
        "theory": theo_out,
    }


def run_hypertree(n, d, seed):
    """Build a random hypertree and report its defining statistics."""
    y = cx.random_hypertree(n, d, seed)
    cert = hm.rank_q(cx.boundary_matrix(y))
    record = ExperimentRecord(
        kind="hypertree",
        params={"n": n, "d": d, "seed": seed},
        stats={"n_faces": y.n_faces,
               "expected_faces": math.comb(n - 1, d),
               "rank": cert.rank,
               "dim_hd": y.n_faces - cert.rank},
    )
    return y, record


def records_to_csv(records, columns) -> str:
    """Deterministic CSV: documented column order, repr'd floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        row = rec.as_row()
        writer.writerow([repr(row[c]) if isinstance(row[c], float)
                         else row[c] for c in columns])
    return buf.getvalue()


def records_to_json(records, columns) -> str:
    rows = [{c: rec.as_row()[c] for c in columns} for rec in records]
    return json.dumps({"tool_version": __version__, "rows": rows}, indent=2)
