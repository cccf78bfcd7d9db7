"""Shadow membership: oracle agreement, monotonicity, scarcity scaling."""

import itertools
import math

import numpy as np
import pytest

from simphase import complexes as cx
from simphase import homology as hm
from simphase import shadow as sh
from simphase.errors import ScaleExceeded


def _boundary_minus_one(d):
    faces = tuple(itertools.combinations(range(d + 2), d + 1))
    return cx.Complex(d + 2, d, faces[:-1]), faces[-1]


def test_shadow_boundary_minus_one_face():
    for d in (2, 3):
        y, missing = _boundary_minus_one(d)
        rep = sh.shadow(y)
        assert rep.members == (missing,)
        assert rep.boundary_completions == 1
        assert rep.density == 1 / math.comb(d + 2, d + 1)
        naive = sh.shadow_naive(y)
        assert naive.members == rep.members


def test_shadow_empty_complex():
    y = cx.Complex(7, 2, ())
    assert sh.shadow(y).members == ()
    assert sh.shadow_naive(y).members == ()


def test_shadow_full_complex():
    y = cx.Complex(5, 2, tuple(itertools.combinations(range(5), 3)))
    rep = sh.shadow(y)
    assert rep.members == () and rep.density == 0.0


def test_shadow_of_hypertree_is_everything():
    # a hypertree's columns span the whole column space, so every
    # candidate is dependent: the shadow is all non-faces
    y = cx.random_hypertree(10, 2, seed=1)
    expected = math.comb(10, 3) - math.comb(9, 2)
    rep = sh.shadow(y)
    naive = sh.shadow_naive(y)
    assert len(rep.members) == expected
    assert rep.members == naive.members


def test_naive_scale_guard():
    y = cx.sample(15, 2, 1.0, seed=0)
    with pytest.raises(ScaleExceeded):
        sh.shadow_naive(y)


def test_shadow_matches_naive_on_corpus(small_corpus):
    for y in small_corpus[:25]:
        fast = sh.shadow(y)
        slow = sh.shadow_naive(y)
        assert fast.members == slow.members
        assert fast.boundary_completions == slow.boundary_completions


def test_density_uses_exact_denominator():
    y = cx.sample(9, 2, 2.5, seed=4)
    rep = sh.shadow(y)
    assert rep.density == len(rep.members) / math.comb(9, 3)


def test_monotone_along_evolution():
    rng = np.random.default_rng(31)
    y = cx.sample(10, 2, 2.0, seed=6)
    prev_shadow = set(sh.shadow(y).members)
    non_faces = [f for f in itertools.combinations(range(10), 3)
                 if f not in set(y.faces)]
    order = rng.permutation(len(non_faces))
    for k in order[:30]:
        sigma = non_faces[k]
        y = y.with_face(sigma)
        cur = set(sh.shadow(y).members)
        assert prev_shadow <= cur | {sigma}
        prev_shadow = cur


def test_members_increment_homology_by_one():
    y = cx.sample(10, 2, 3.0, seed=8)
    base = hm.homology_profile(y).dim_hd
    rep = sh.shadow(y)
    for member in rep.members[:10]:
        grown = hm.homology_profile(y.with_face(member)).dim_hd
        assert grown == base + 1
    # and a non-member does not raise dim H_d
    non_members = [f for f in itertools.combinations(range(10), 3)
                   if f not in set(y.faces) and f not in set(rep.members)]
    for f in non_members[:5]:
        assert hm.homology_profile(y.with_face(f)).dim_hd == base


def test_subcritical_scarcity_linear_growth():
    # |SH| grows like n in the subcritical regime, not like n^3
    c, seeds = 2.0, 6
    sizes = {}
    for n in (20, 30, 40):
        vals = [len(sh.shadow(cx.sample(n, 2, c, s)).members)
                for s in range(seeds)]
        sizes[n] = float(np.mean(vals))
    r1 = (sizes[40] / 40) / max(sizes[20] / 20, 1e-9)
    assert 1 / 3 < r1 < 3
    cubic = (sizes[40] / 40**3) / max(sizes[20] / 20**3, 1e-12)
    assert cubic < 1 / 3  # clearly not cubic scaling
