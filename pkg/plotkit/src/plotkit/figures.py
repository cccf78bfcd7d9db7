"""Figure construction from simphase experiment files.

Three figure kinds:

* ``betti``         -- Betti densities vs c: empirical means over seeds,
                       theory overlays, threshold markers.
* ``shadow_pair``   -- two panels: the graph shadow density (continuous
                       at c=1) next to the complex shadow density with
                       its first-order jump at c*.
* ``tree_spectral`` -- kernel-mass estimate vs truncation depth with the
                       closed-form bound.

Input CSV headers must match the documented contracts exactly; anything
else raises SchemaMismatch.  Rendering is a pure function of the input
files: re-running produces byte-identical images.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


class SchemaMismatch(ValueError):
    """Input file does not carry the documented header."""


# the documented CSV contracts (FORMATS.md); order-sensitive
SCHEMAS = {
    "betti": ["d", "n", "c", "seed", "n_faces", "rank_d", "dim_hd",
              "dim_hd1", "dim_ker_l", "beta_d_emp", "beta_dm1_emp",
              "beta_d_theory", "beta_dm1_theory",
              "c_col_theory", "c_star_theory"],
    "shadow_pair": ["d", "n", "c", "seed", "n_faces", "shadow_size",
                    "shadow_density", "boundary_completions",
                    "shadow_theory", "graph_shadow_theory",
                    "c_col_theory", "c_star_theory"],
    "tree_spectral": ["d", "c", "depth", "mean_x", "p_positive",
                      "closed_form", "kernel_bound"],
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: inputs, figure kind, and where to write the image."""

    input_paths: tuple[str, ...]
    kind: str
    output_path: str
    dpi: int = 120
    annotations: bool = field(default=True)

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise SchemaMismatch(
                f"unknown figure kind {self.kind!r}; expected one of "
                f"{sorted(SCHEMAS)}")
        object.__setattr__(self, "input_paths", tuple(self.input_paths))
        if not self.input_paths:
            raise SchemaMismatch("no input files given")


def read_rows(path, kind: str) -> list[dict]:
    """Parse one CSV after validating its header against the contract."""
    expected = SCHEMAS[kind]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty input file") from None
        if header != expected:
            raise SchemaMismatch(
                f"{path}: header {header!r} does not match the documented "
                f"columns {expected!r}")
        rows = []
        for line in reader:
            rows.append({k: float(v) for k, v in zip(expected, line)})
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    return rows


def _mean_by_c(rows, column):
    """Grid values of c (sorted) and the per-c mean of one column."""
    groups: dict[float, list[float]] = {}
    for r in rows:
        groups.setdefault(r["c"], []).append(r[column])
    cs = sorted(groups)
    return np.array(cs), np.array([float(np.mean(groups[c])) for c in cs])


def _first_by_c(rows, column):
    seen: dict[float, float] = {}
    for r in rows:
        seen.setdefault(r["c"], r[column])
    cs = sorted(seen)
    return np.array(cs), np.array([seen[c] for c in cs])


def _thresholds(rows) -> tuple[float, float]:
    return rows[0]["c_col_theory"], rows[0]["c_star_theory"]


def _mark_thresholds(ax, c_col, c_star):
    ax.axvline(c_col, color="gray", linestyle=":", linewidth=1.2,
               label=f"collapse threshold {c_col:.3f}")
    ax.axvline(c_star, color="black", linestyle="--", linewidth=1.2,
               label=f"homology threshold {c_star:.3f}")


def _build_betti(rows, annotations):
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    cs, beta_d = _mean_by_c(rows, "beta_d_emp")
    _, beta_dm1 = _mean_by_c(rows, "beta_dm1_emp")
    ct, theory_d = _first_by_c(rows, "beta_d_theory")
    _, theory_dm1 = _first_by_c(rows, "beta_dm1_theory")
    d = int(rows[0]["d"])
    n = int(rows[0]["n"])
    ax.plot(ct, theory_d, color="firebrick",
            label=rf"$\beta_{{{d}}}$ density (limit)")
    ax.plot(ct, theory_dm1, color="steelblue",
            label=rf"$\beta_{{{d-1}}}$ density (limit)")
    ax.plot(cs, beta_d, "o", color="firebrick", ms=4,
            label=rf"$\beta_{{{d}}}$ empirical (n={n})")
    ax.plot(cs, beta_dm1, "s", color="steelblue", ms=4,
            label=rf"$\beta_{{{d-1}}}$ empirical")
    c_col, c_star = _thresholds(rows)
    if annotations:
        _mark_thresholds(ax, c_col, c_star)
    ax.set_xlabel("c")
    ax.set_ylabel("density")
    ax.set_title(f"Betti densities of random {d}-complexes")
    ax.legend(fontsize=8)
    fig.tight_layout()
    meta = {"c_col": c_col, "c_star": c_star,
            "theory_below": float(theory_d[ct < c_star].max(initial=0.0)),
            "theory_above": float(theory_d[ct > c_star].min(initial=np.inf))}
    return fig, meta


def _build_shadow_pair(rows, annotations):
    fig, (ax_g, ax_c) = plt.subplots(1, 2, figsize=(10.0, 4.2))
    cs, emp = _mean_by_c(rows, "shadow_density")
    ct, theory = _first_by_c(rows, "shadow_theory")
    _, graph = _first_by_c(rows, "graph_shadow_theory")
    c_col, c_star = _thresholds(rows)
    d = int(rows[0]["d"])
    n = int(rows[0]["n"])

    ax_g.plot(ct, graph, color="seagreen")
    ax_g.axvline(1.0, color="black", linestyle="--", linewidth=1.2,
                 label="c = 1")
    ax_g.set_title("graph shadow density (continuous)")
    ax_g.set_xlabel("c")
    ax_g.set_ylabel("density")
    ax_g.legend(fontsize=8)

    # draw the two branches separately so the jump at c* stays visible
    below = ct < c_star
    above = ct > c_star
    finite = ~np.isnan(theory)
    ax_c.plot(ct[below & finite], theory[below & finite], color="firebrick",
              label="limit density")
    ax_c.plot(ct[above & finite], theory[above & finite], color="firebrick")
    ax_c.plot(cs, emp, "o", ms=4, color="dimgray",
              label=f"empirical (n={n})")
    if annotations:
        _mark_thresholds(ax_c, c_col, c_star)
    ax_c.set_title(f"{d}-complex shadow density (first-order jump)")
    ax_c.set_xlabel("c")
    ax_c.legend(fontsize=8)
    fig.tight_layout()
    jump_lo = float(theory[below & finite].max(initial=0.0))
    vals_above = theory[above & finite]
    meta = {"c_col": c_col, "c_star": c_star,
            "jump_low": jump_lo,
            "jump_high": float(vals_above.min(initial=np.inf)),
            "graph_max_step": float(np.abs(np.diff(graph)).max(initial=0.0))}
    return fig, meta


def _build_tree_spectral(rows, annotations):
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    depths = np.array([r["depth"] for r in rows])
    mean_x = np.array([r["mean_x"] for r in rows])
    order = np.argsort(depths)
    ax.plot(depths[order], mean_x[order], "o-", color="steelblue",
            label="mean kernel mass (truncation)")
    kb = rows[0]["kernel_bound"]
    cf = rows[0]["closed_form"]
    if annotations:
        ax.axhline(kb, color="black", linestyle="--", linewidth=1.2,
                   label=f"kernel-mass bound {kb:.4f}")
        if not math.isclose(cf, kb, abs_tol=1e-9):
            ax.axhline(cf, color="gray", linestyle=":", linewidth=1.0,
                       label=f"closed form {cf:.4f}")
    d = int(rows[0]["d"])
    ax.set_xlabel("truncation depth")
    ax.set_ylabel("kernel mass at the root")
    ax.set_title(f"Poisson {d}-tree kernel mass, c = {rows[0]['c']:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    meta = {"kernel_bound": kb, "closed_form": cf,
            "final_mean_x": float(mean_x[order][-1])}
    return fig, meta


_BUILDERS = {
    "betti": _build_betti,
    "shadow_pair": _build_shadow_pair,
    "tree_spectral": _build_tree_spectral,
}


def build_figure(spec: FigureSpec):
    """Figure plus a metadata dict of the drawn annotation values."""
    rows: list[dict] = []
    for path in spec.input_paths:
        rows.extend(read_rows(path, spec.kind))
    return _BUILDERS[spec.kind](rows, spec.annotations)


def render(spec: FigureSpec) -> Path:
    """Write the figure; deterministic given identical inputs."""
    fig, _ = build_figure(spec)
    out = Path(spec.output_path)
    suffix = out.suffix.lower()
    try:
        if suffix == ".svg":
            with matplotlib.rc_context({"svg.hashsalt": "plotkit"}):
                fig.savefig(out, dpi=spec.dpi, metadata={"Date": None})
        else:
            fig.savefig(out, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return out
