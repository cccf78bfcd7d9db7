"""Poisson d-trees: operator form, recursion/oracle duality, population runs."""

import math

import numpy as np
import pytest

from oracles import kernel_mass_binomial_sum
from simphase import dtree as dt
from simphase import thresholds as th
from simphase.errors import NotAFixedPoint, ScaleExceeded
from simphase.manifest import load_manifest

MANIFEST = load_manifest()


def test_sample_tree_trivial_and_validation():
    t = dt.sample_tree(2, 3.0, 0, seed=0)
    assert t.n_vertices == 1
    assert t.truncation_depth == 0
    with pytest.raises(ValueError):
        dt.sample_tree(2, 3.0, 3, seed=0)
    with pytest.raises(ValueError):
        dt.sample_tree(1, 3.0, 2, seed=0)
    with pytest.raises(ValueError):
        dt.sample_tree(2, -1.0, 2, seed=0)


def test_sample_tree_determinism():
    a = dt.sample_tree(2, 3.0, 6, seed=12)
    b = dt.sample_tree(2, 3.0, 6, seed=12)
    assert a.n_vertices == b.n_vertices
    assert a.groups == b.groups


def test_sample_tree_branching_means():
    c, d, n = 3.0, 2, 10_000
    depth1 = np.empty(n)
    depth2 = np.empty(n)
    for seed in range(n):
        t = dt.sample_tree(d, c, 2, seed=seed)
        m = t.child_count(0)
        depth1[seed] = m
        depth2[seed] = m * d  # every odd vertex has exactly d children
    se1 = math.sqrt(c / n)
    assert abs(depth1.mean() - c) <= 3 * se1
    se2 = math.sqrt(np.var(depth2) / n)
    assert abs(depth2.mean() - c * d) <= 3 * se2


def test_tree_operator_depth2_block_form():
    d, m = 2, 3
    t = dt.depth2_tree(d, m)
    op = dt.tree_operator(t)
    n = 1 + m * d
    expected = np.zeros((n, n))
    expected[0, 0] = m
    for j in range(m):
        sl = slice(1 + j * d, 1 + (j + 1) * d)
        expected[sl, sl] = 1.0       # the all-ones block J
        expected[0, sl] = 1.0        # the j column
        expected[sl, 0] = 1.0
    assert (op == expected).all()


def test_tree_operator_single_vertex_and_psd():
    assert (dt.tree_operator(dt.sample_tree(2, 1.0, 0, 0)) == [[0.0]]).all()
    for seed in range(8):
        t = dt.sample_tree(2, 2.5, 4, seed=seed)
        eigvals = np.linalg.eigvalsh(dt.tree_operator(t))
        assert eigvals.min() >= -1e-9


def test_depth2_closed_form():
    for d in (2, 3):
        for m in range(0, 7):
            t = dt.depth2_tree(d, m)
            exact = d / (d + m)
            assert dt.x_recursive(t).x == pytest.approx(exact, abs=1e-12)
            assert dt.x_oracle(t).x == pytest.approx(exact, abs=1e-9)


def test_x_trivial_cases():
    single = dt.sample_tree(2, 1.0, 0, seed=0)
    assert dt.x_recursive(single).x == 1.0
    assert dt.x_oracle(single).x == 1.0


def test_oracle_scale_guard():
    big = dt.sample_tree(2, 9.0, 6, seed=0)
    if big.n_vertices > 4000:
        with pytest.raises(ScaleExceeded):
            dt.x_oracle(big)
    else:  # improbable with c=9, but keep the test honest
        dt.x_oracle(big)


def test_recursion_matches_oracle_quick():
    rng = np.random.default_rng(1)
    for d in (2, 3):
        for c in (1.0, 2.5, 4.0):
            done = 0
            seed = 0
            while done < 20:
                depth = int(rng.choice([2, 4, 6]))
                t = dt.sample_tree(d, c, depth, seed=seed)
                seed += 1
                if t.n_vertices > 4000:
                    continue
                assert abs(dt.x_recursive(t).x - dt.x_oracle(t).x) < 1e-8
                done += 1


def test_x_recursive_in_unit_interval():
    for seed in range(30):
        x = dt.x_recursive(dt.sample_tree(2, 3.0, 6, seed=seed)).x
        assert 0.0 <= x <= 1.0


def test_truncate_consistency():
    t = dt.sample_tree(2, 3.0, 8, seed=5)
    t4 = dt.truncate(t, 4)
    assert t4.truncation_depth == 4
    assert t4.depth.max() <= 4
    # a freshly sampled depth-4 tree with the same seed agrees
    fresh = dt.sample_tree(2, 3.0, 4, seed=5)
    assert fresh.n_vertices == t4.n_vertices
    assert fresh.groups == t4.groups


def test_population_dynamics_validation():
    with pytest.raises(ValueError):
        dt.population_dynamics(2, 3.0, pool=100, sweeps=100, seed=0)
    with pytest.raises(ValueError):
        dt.population_dynamics(2, 3.0, pool=10_000, sweeps=5, seed=0)
    with pytest.raises(ValueError):
        dt.population_dynamics(2, 3.0, pool=10_000, sweeps=100, seed=0,
                               init="half")


def test_population_dynamics_reproducible():
    a = dt.population_dynamics(2, 3.0, pool=10_000, sweeps=100, seed=3,
                               init="zeros")
    b = dt.population_dynamics(2, 3.0, pool=10_000, sweeps=100, seed=3,
                               init="zeros")
    assert a == b


def test_population_dynamics_small_c():
    res = dt.population_dynamics(2, 0.05, pool=10_000, sweeps=100, seed=0)
    assert res.mean_x > 0.95


def test_population_dynamics_basins():
    tol = MANIFEST["popdyn_abs_tol"] + 0.005  # smaller pool than acceptance
    # subcritical, all-ones: stays on the t = 1 branch
    res = dt.population_dynamics(2, 2.0, pool=20_000, sweeps=150, seed=0,
                                 init="ones")
    assert res.p_positive == 1.0
    assert abs(res.mean_x - (1 - 2 / 3)) < tol
    # supercritical, all-zeros: lands on the smallest interior fixed point
    res = dt.population_dynamics(2, 4.0, pool=20_000, sweeps=150, seed=0,
                                 init="zeros")
    assert abs(res.p_positive - th.t_c(2, 4.0)) < tol
    assert res.mean_x <= th.kernel_bound(2, 4.0) + 0.01
    # subcritical from zeros climbs back to t = 1
    res = dt.population_dynamics(2, 2.0, pool=20_000, sweeps=150, seed=0,
                                 init="zeros")
    assert abs(res.p_positive - 1.0) < tol
    assert res.mean_x <= th.kernel_bound(2, 2.0) + 0.01


def test_closed_form_examples():
    for d, c in [(2, 2.0), (2, 4.0), (3, 5.0)]:
        val = dt.expected_kernel_closed_form(d, c, 1.0)
        assert val == pytest.approx(1 - c / (d + 1), abs=1e-14)
    # binomial-sum identity at interior fixed points
    for c in (3.0, 3.5, 5.0):
        t = th.t_c(2, c)
        direct = dt.expected_kernel_closed_form(2, c, t)
        assert direct == pytest.approx(kernel_mass_binomial_sum(2, c, t),
                                       abs=1e-12)
    # maximum over fixed points equals the thresholds route
    for d, c in [(2, 2.0), (2, 3.1), (3, 4.5), (2, 6.0)]:
        best = max(dt.expected_kernel_closed_form(d, c, t)
                   for t in th.fixed_points(d, c))
        assert best == pytest.approx(th.kernel_bound(d, c), abs=1e-12)
    with pytest.raises(NotAFixedPoint):
        dt.expected_kernel_closed_form(2, 3.0, 0.5)


def test_truncation_gap_shrinks():
    # deepening truncation changes E[x] by less and less
    depths = [2, 4, 6, 8, 10]
    trees = 250
    xs = np.empty((len(depths), trees))
    for j in range(trees):
        t = dt.sample_tree(2, 3.0, 10, seed=10_000 + j)
        for i, k in enumerate(depths):
            xs[i, j] = dt.x_recursive(dt.truncate(t, k)).x
    means = xs.mean(axis=1)
    gaps = np.abs(np.diff(means))
    assert (np.diff(gaps) < 1e-3).all()  # monotonically shrinking (MC slack)
    assert gaps[-1] < MANIFEST["truncation_gap_depth8_to_10_max"]
    # one level deeper via the pool recursion (the tree MC gets expensive):
    # the all-ones pool after k sweeps is distributed as depth-2k truncation
    rng = np.random.default_rng(99)
    x = np.ones(400_000)
    means_pool = []
    for _ in range(6):
        x = dt.population_sweep(x, 2, 3.0, rng)
        means_pool.append(float(x.mean()))
    gap_10_12 = abs(means_pool[5] - means_pool[4])
    assert gap_10_12 < MANIFEST["truncation_gap_depth10_to_12_max"]
    # the pool and tree estimates of the same quantity agree
    assert abs(means_pool[4] - means[-1]) < 0.01
