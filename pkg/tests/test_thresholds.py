"""Closed-form threshold quantities: spec examples and invariants.

Frozen constants below were derived with the independent oracles in
oracles.py (plain bisection, dense grid scans) and confirmed with a
60-digit mpmath bisection; the in-test oracles re-derive the cheap ones.
"""

import math

import numpy as np
import pytest

from oracles import (bisect_root, central_diff, kernel_bound_case_split,
                     t_c_grid_oracle)
from simphase import thresholds as th
from simphase.errors import AtCriticalPoint, NoInteriorRoot

# frozen oracle values (bisection to float collapse / mpmath at 60 digits)
T_PSI_2 = 0.284668137040838462
C_COL_2 = 2.45540748228412795
T_STAR_2 = 0.11658603275812084595
C_STAR_2 = 2.75380582997425804
T_C_2_35 = 0.0396344297774022149
T_C_2_40 = 0.0217565349880825565
G_2_35 = 0.200948264613328368
GP_2_35 = 0.295249037829355391
SHADOW_2_35 = 0.885747113488066174
JUMP_2 = 0.689434138141657746  # (1 - t_star(2))^3


def test_phi_examples():
    # approaches 0 from above near t=1 with leading term (d-1)/2 (1-t)^2
    for eps in (1e-3, 1e-4):
        val = th.phi(2, 1.0 - eps)
        assert val > 0
        assert val == pytest.approx(0.5 * eps**2, rel=0.05)
    # diverges to -inf near 0
    assert th.phi(2, 1e-8) < -10
    # vanishes at the root found by an independent bisection oracle
    oracle_root = bisect_root(lambda t: th.phi(2, t), 0.05, 0.28)
    assert abs(oracle_root - T_STAR_2) < 1e-13
    assert abs(th.phi(2, oracle_root)) < 1e-10
    assert abs(th.phi(2, th.t_star(2))) < 1e-10


def test_phi_domain_errors():
    for bad in (0.0, 1.0, -0.3, 1.7):
        with pytest.raises(ValueError):
            th.phi(2, bad)
        with pytest.raises(ValueError):
            th.psi(2, bad)


def test_d_one_rejected_everywhere():
    for fn in (th.phi, th.psi):
        with pytest.raises(ValueError):
            fn(1, 0.5)
    for fn in (th.t_star, th.c_star, th.t_psi, th.c_col):
        with pytest.raises(ValueError):
            fn(1)
    with pytest.raises(ValueError):
        th.fixed_points(1, 2.0)


def test_psi_examples():
    assert th.psi(2, 0.5) == pytest.approx(4 * math.log(2), abs=1e-14)
    assert th.psi(2, th.t_psi(2)) == pytest.approx(2.455, abs=1e-3)
    # diverges toward 1
    assert th.psi(2, 1 - 1e-8) > 1e6
    assert th.psi(3, 1 - 1e-4) > 1e3


def test_t_star_examples():
    assert th.t_star(2) == pytest.approx(T_STAR_2, abs=1e-14)
    assert abs(th.phi(2, th.t_star(2))) < 1e-10
    assert th.t_star(2) < th.t_psi(2)
    # large-d asymptotics t* ~ e^{-(d+1)}
    ref = math.exp(-21)
    assert abs(th.t_star(20) - ref) / ref < 0.01


def test_c_star_table_values():
    assert th.c_star(2) == pytest.approx(2.754, abs=1e-3)
    assert th.c_star(3) == pytest.approx(3.907, abs=1e-3)
    assert th.c_star(4) == pytest.approx(4.962, abs=1e-3)
    assert th.c_star(5) == pytest.approx(5.984, abs=1e-3)
    assert th.cstar_gap_log10(10) == pytest.approx(-3.73, abs=0.01)


def test_t_psi_c_col_examples():
    assert th.c_col(2) == pytest.approx(2.455, abs=1e-3)
    assert th.c_col(3) == pytest.approx(3.089, abs=1e-3)
    assert th.c_col(10) == pytest.approx(4.749, abs=1e-3)
    assert th.c_col(1000) == pytest.approx(10.175, abs=1e-3)
    tp = th.t_psi(2)
    assert abs(1 - tp + 2 * tp * math.log(tp)) < 1e-10


def test_fixed_points_structure():
    # below the collapse threshold only t=1 remains
    assert th.fixed_points(2, 2.0) == [1.0]
    assert th.fixed_points(2, 0.5) == [1.0]
    # at 2*c_col there are two interior roots, both on the psi level set
    c = 2 * th.c_col(2)
    pts = th.fixed_points(2, c)
    assert len(pts) == 3 and pts[-1] == 1.0
    for t in pts[:-1]:
        assert abs(th.psi(2, t) - c) < 1e-9
    assert pts[0] < pts[1] < 1.0


def test_fixed_points_at_most_three_random():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        d = int(rng.integers(2, 7))
        c = float(rng.uniform(0.05, 20.0))
        pts = th.fixed_points(d, c)
        assert 1 <= len(pts) <= 3
        assert pts[-1] == 1.0
        for t in pts[:-1]:
            assert abs(th.psi(d, t) - c) < 1e-8


def test_t_c_examples():
    assert th.t_c(2, th.c_star(2)) == pytest.approx(th.t_star(2), abs=1e-9)
    for c in (3.0, 3.5, 4.0, 6.0):
        t = th.t_c(2, c)
        assert abs(t - math.exp(-c * (1 - t) ** 2)) < 1e-12
    # independent dense-grid oracle
    assert abs(th.t_c(2, 4.0) - t_c_grid_oracle(2, 4.0)) < 1e-6
    assert abs(th.t_c(2, 4.0) - T_C_2_40) < 1e-12
    with pytest.raises(NoInteriorRoot):
        th.t_c(2, 2.0)
    with pytest.raises(NoInteriorRoot):
        th.t_c(2, th.c_col(2) - 1e-3)


def test_betti_density_examples():
    for c in (0.5, 1.5, 2.5, 2.753):
        assert th.betti_density(2, c) == 0.0
    g = th.betti_density(2, 3.5)
    assert g > 0
    assert g == pytest.approx(G_2_35, abs=1e-13)
    # substitute the independently derived fixed point
    t = T_C_2_35
    expect = 3.5 * t * (1 - t) ** 2 + 3.5 / 3 * (1 - t) ** 3 - (1 - t)
    assert g == pytest.approx(expect, abs=1e-12)
    # identity with the kernel-bound route
    for c in (3.0, 3.5, 5.0):
        lhs = th.betti_density(2, c)
        rhs = th.kernel_bound(2, c) - (1 - c / 3)
        assert abs(lhs - rhs) < 1e-12


def test_betti_density_prime():
    assert th.betti_density_prime(2, 3.5) == pytest.approx(GP_2_35, abs=1e-13)
    # finite-difference oracle
    fd = central_diff(lambda c: th.betti_density(2, c), 3.5, 1e-6)
    assert abs(fd - th.betti_density_prime(2, 3.5)) < 1e-5
    # equals shadow density / (d+1)
    for c in (3.0, 4.5):
        assert th.betti_density_prime(2, c) == pytest.approx(
            th.shadow_density(2, c) / 3, abs=1e-14)
    # first-order transition: derivative bounded away from 0 just above c*
    assert th.betti_density_prime(2, th.c_star(2) + 1e-6) > 0.2


def test_shadow_density_examples():
    assert th.shadow_density(2, 2.0) == 0.0
    jump = th.shadow_density(2, th.c_star(2) + 1e-9)
    assert jump == pytest.approx((1 - th.t_star(2)) ** 3, abs=1e-6)
    assert jump == pytest.approx(JUMP_2, abs=1e-6)
    assert th.shadow_density(2, 100.0) > 0.99
    assert th.shadow_density(2, 3.5) == pytest.approx(SHADOW_2_35, abs=1e-13)
    with pytest.raises(AtCriticalPoint):
        th.shadow_density(2, th.c_star(2))


def test_kernel_bound_examples():
    assert th.kernel_bound(2, 2.0) == pytest.approx(1 / 3, abs=1e-14)
    rng = np.random.default_rng(11)
    for _ in range(1000):
        d = int(rng.integers(2, 7))
        c = float(rng.uniform(0.05, 12.0))
        kb = th.kernel_bound(d, c)
        assert 0.0 <= kb <= 1.0
        assert kb == pytest.approx(kernel_bound_case_split(d, c), abs=1e-12)


def test_root_invariants_all_d():
    for d in range(2, 1001):
        u = th.ln_t_star(d)
        assert abs(th.phi_from_log(d, u)) < 1e-10
        tp = th.t_psi(d)
        assert abs(1 - tp + d * tp * math.log(tp)) < 1e-10
        assert math.log(tp) > u          # t* < t_psi
    # plain-domain agreement where t* is representable
    for d in (2, 5, 20, 100, 300):
        assert th.t_star(d) == pytest.approx(math.exp(th.ln_t_star(d)),
                                             rel=1e-12)
        assert abs(th.phi(d, th.t_star(d))) < 1e-10


def test_threshold_ordering_and_asymptotics():
    for d in (2, 3, 5, 10, 50):
        assert 0 < th.t_star(d) < th.t_psi(d) < 1
        assert th.c_col(d) < th.c_star(d)
    # Remark-2 asymptote: c_star -> (d+1)(1 - e^{-(d+1)})
    for d in (10, 12, 15, 20, 50):
        ref = (d + 1) * (1 - math.exp(-(d + 1)))
        assert abs(th.c_star(d) - ref) < 1e-6


def test_jump_positivity_many_d():
    for d in range(2, 51):
        eps = 1e-9
        jump = th.shadow_density(d, th.c_star(d) + eps)
        expect = math.exp((d + 1) * math.log1p(-th.t_star(d)))
        assert jump >= expect - 1e-6


def test_large_d_log_domain():
    # log-domain evaluation stays finite and consistent up to d = 10^4
    for d in (2000, 5000, 10_000):
        u = th.ln_t_star(d)
        assert -(d + 2) < u < 0
        assert abs(th.phi_from_log(d, u)) < 1e-9
        assert th.psi_from_log(d, u) == pytest.approx(d + 1, rel=1e-9)
        gap = th.cstar_gap_log10(d)
        assert gap == pytest.approx(math.log10(d + 1) + u / math.log(10),
                                    abs=1e-6)


def test_threshold_report():
    rep = th.threshold_report(2)
    assert rep.c is None and rep.t_c is None
    rep = th.threshold_report(2, 3.5)
    assert rep.t_c == pytest.approx(T_C_2_35, abs=1e-12)
    assert rep.g == pytest.approx(G_2_35, abs=1e-12)
    assert rep.shadow_density == pytest.approx(SHADOW_2_35, abs=1e-12)
    assert rep.kernel_bound == pytest.approx(
        kernel_bound_case_split(2, 3.5), abs=1e-12)
    rep_sub = th.threshold_report(2, 2.0)
    assert rep_sub.t_c is None and rep_sub.g == 0.0 and rep_sub.g_prime == 0.0
    rep_crit = th.threshold_report(2, th.c_star(2))
    assert rep_crit.shadow_density is None


def test_pure_functions_are_reentrant():
    import concurrent.futures

    with concurrent.futures.ThreadPoolExecutor(8) as pool:
        vals = list(pool.map(lambda _: th.c_star(2), range(64)))
    assert all(v == vals[0] for v in vals)
