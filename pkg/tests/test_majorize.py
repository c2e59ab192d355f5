from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitcone.majorize import (
    NotProper, StepFunction, equimeasurable, haar_unitary, hlp_slack, hull_membership_finite,
    hull_membership_lp, hull_membership_twosided, l1_sumzero_polytope, maxnorm_identity_check,
    permutation_cone_check, random_proper_permutation_cone, ryff_majorized, ryff_rearrangement,
    s_k, schur_horn_sample, trial_rng,
)

small = st.integers(-6, 6)


def test_s_k_basic():
    assert s_k((3, 1, 2), 1) == 3
    assert s_k((3, 1, 2), 2) == 5
    assert s_k((3, 1, 2), 3) == 6
    with pytest.raises(ValueError):
        s_k((1, 2), 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=2, max_size=6), st.lists(small, min_size=2, max_size=6))
def test_s_k_is_sublinear_and_symmetric(x, y):
    n = min(len(x), len(y))
    x, y = x[:n], y[:n]
    for k in range(1, n + 1):
        assert s_k([a + b for a, b in zip(x, y)], k) <= s_k(x, k) + s_k(y, k)
        assert s_k(list(reversed(x)), k) == s_k(x, k)
        assert s_k([3 * a for a in x], k) == 3 * s_k(x, k)


def test_hlp_examples():
    assert hull_membership_finite((0, 1, 2), (1, 1, 1))
    assert not hull_membership_finite((0, 1, 2), (0, 0, 3))
    assert hull_membership_finite((0, 1, 2), (2, 0, 1))
    assert not hull_membership_finite((0, 1, 2), (1, 1, 2))   # different totals
    with pytest.raises(ValueError):
        hull_membership_finite((1, 2), (1, 2, 3))


def test_hlp_tolerance():
    assert not hull_membership_finite((0, 1), (F(1, 2), F(1, 2) + F(1, 10**6)))
    assert hull_membership_finite((0, 1), (0.5, 0.5 + 1e-12), tol=1e-9)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.lists(small, min_size=n, max_size=n),
                                                     st.lists(small, min_size=n, max_size=n))))
def test_hlp_agrees_with_lp(pair):
    x, y = pair
    assert hull_membership_finite(x, y) == hull_membership_lp(x, y)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.lists(small, min_size=n, max_size=n),
                                                     st.lists(small, min_size=n, max_size=n))))
def test_twosided_form_agrees_with_hlp(pair):
    x, y = pair
    assert hull_membership_twosided(x, y) == hull_membership_finite(x, y)


def test_hlp_slack_zero_iff_inside():
    assert hlp_slack((0, 1, 2), (1, 1, 1)) == 0
    assert hlp_slack((0, 1, 2), (0, 0, 3)) == pytest.approx(1.0)


# -- Schur-Horn -----------------------------------------------------------------

def test_haar_unitary_is_unitary():
    for i in range(20):
        u = haar_unitary(4, trial_rng(5, i))
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12


def test_haar_first_moments():
    n, m = 3, 4000
    samples = np.array([haar_unitary(n, trial_rng(7, i))[0, 0] for i in range(m)])
    assert abs(samples.mean()) < 0.05
    assert abs(np.mean(np.abs(samples) ** 2) - 1 / n) < 0.02


def test_haar_phases_are_not_biased():
    # Haar measure is invariant under diagonal phases, so arg(U_00) is uniform
    args = np.array([np.angle(haar_unitary(2, trial_rng(8, i))[0, 0]) for i in range(4000)])
    hist, _ = np.histogram(args, bins=8, range=(-np.pi, np.pi))
    assert hist.min() > 0.8 * 500 and hist.max() < 1.2 * 500


def test_schur_horn_small():
    res = schur_horn_sample([3, 1, 0], 200, seed=0)
    assert res["violations"] == 0 and res["max_slack"] < 1e-9
    assert res["vertex_error"] == 0
    with pytest.raises(ValueError):
        schur_horn_sample([1], 5, seed=0)


def test_schur_horn_is_reproducible():
    a = schur_horn_sample([2, 1, 0, -1], 30, seed=4)
    b = schur_horn_sample([2, 1, 0, -1], 30, seed=4)
    assert [r.max_slack for r in a["records"]] == [r.max_slack for r in b["records"]]


# -- Ryff -----------------------------------------------------------------------

def test_ryff_example():
    f = StepFunction.from_blocks([(0, F(1, 2)), (1, F(1, 2))])
    g = StepFunction.from_blocks([(F(1, 2), 1)])
    assert ryff_majorized(g, f)
    assert not ryff_majorized(f, g)
    assert ryff_rearrangement(f).values == (1, 0)


def test_ryff_unequal_totals():
    f = StepFunction.from_blocks([(2, 1)])
    g = StepFunction.from_blocks([(1, 1)])
    assert not ryff_majorized(g, f)


def test_rearrangement_is_equimeasurable_and_idempotent():
    f = StepFunction.from_blocks([(1, F(1, 4)), (3, F(1, 4)), (-1, F(1, 3)), (3, F(1, 6))])
    r = ryff_rearrangement(f)
    assert equimeasurable(f, r)
    assert ryff_rearrangement(r) == r
    assert r.values == (3, 1, -1) and r.integral() == f.integral()


def test_ryff_matches_finite_majorization():
    # equal-length blocks reduce to vectors
    for i in range(50):
        rng = trial_rng(13, i)
        x = [int(a) for a in rng.integers(-4, 5, size=4)]
        y = [int(a) for a in rng.permutation(x)]
        y[0] += 1
        y[1] -= 1
        fx = StepFunction.from_blocks([(v, F(1, 4)) for v in x])
        fy = StepFunction.from_blocks([(v, F(1, 4)) for v in y])
        assert ryff_majorized(fy, fx) == hull_membership_finite(x, y)


def test_step_function_validation():
    with pytest.raises(ValueError):
        StepFunction((0, F(1, 2)), (1,))
    with pytest.raises(ValueError):
        StepFunction((0, 1), (1, 2))


# -- sum-zero l1 ball -------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_maxnorm_identity(n):
    assert maxnorm_identity_check(n)


def test_maxnorm_polytope_vertex_count():
    assert len(l1_sumzero_polytope(4).points) == 12
    with pytest.raises(ValueError):
        maxnorm_identity_check(1)


# -- permutation-invariant cones ----------------------------------------------------

def test_orthant_dichotomy():
    res = permutation_cone_check([(1, 0, 0)], 3)
    assert res["chi_sign"] == 1 and res["dichotomy"]
    # every interior point is strictly positive, so no e_F1 - b e_F2 fits
    assert res["witness"] is None


def test_halfspace_witness():
    res = permutation_cone_check([(1, 0, 0), (1, -1, 0), (-1, 1, 0)], 3)
    assert res["chi_sign"] == 1
    f1, f2, b = res["witness"]
    assert not set(f1) & set(f2) and 0 < b < F(len(f1), len(f2))


def test_negative_orbit_dichotomy():
    res = permutation_cone_check([(-2, 1, 0)], 3)
    assert res["dichotomy"] and res["chi_sign"] == -1


def test_whole_space_is_not_proper():
    with pytest.raises(NotProper):
        permutation_cone_check([(1, 1, 0), (-1, -1, 0)], 3)
    with pytest.raises(NotProper):
        permutation_cone_check([(1, 0, 0), (-1, 0, 0)], 3)


def test_empty_interior_rejected():
    with pytest.raises(ValueError):
        permutation_cone_check([(1, 1, 1)], 3)
    with pytest.raises(ValueError):
        permutation_cone_check([(1, -1, 0)], 3)


def test_random_proper_cones_satisfy_dichotomy():
    for n in (3, 4):
        for i in range(10):
            vecs = random_proper_permutation_cone(n, trial_rng(17, i))
            assert permutation_cone_check(vecs, n, find_witness=False)["dichotomy"]


def test_ryff_two_block_examples():
    f = StepFunction.from_blocks([(1, F(1, 2)), (3, F(1, 2))])
    assert ryff_rearrangement(f) == StepFunction.from_blocks([(3, F(1, 2)), (1, F(1, 2))])
    f31 = StepFunction.from_blocks([(3, F(1, 2)), (1, F(1, 2))])
    g40 = StepFunction.from_blocks([(4, F(1, 2)), (0, F(1, 2))])
    assert f31.integral() == g40.integral() == 2
    assert ryff_rearrangement(g40).cumulative(F(1, 2)) == 2 > ryff_rearrangement(f31).cumulative(F(1, 2))
    assert not ryff_majorized(g40, f31)
    swapped = StepFunction.from_blocks([(1, F(1, 2)), (3, F(1, 2))])
    assert ryff_majorized(swapped, f31) and ryff_majorized(f31, swapped)


def test_ryff_order_on_random_corpus():
    fs = []
    for i in range(30):
        rng = trial_rng(23, i)
        k = int(rng.integers(1, 5))
        lengths = [F(int(a)) for a in rng.integers(1, 5, size=k)]
        total = sum(lengths)
        fs.append(StepFunction.from_blocks([(F(int(rng.integers(-3, 4))), ln / total) for ln in lengths]))
    for f in fs:
        assert ryff_majorized(f, f)
        assert ryff_rearrangement(ryff_rearrangement(f)) == ryff_rearrangement(f)
    for f in fs:
        for g in fs:
            for h in fs[:10]:
                if ryff_majorized(f, g) and ryff_majorized(g, h):
                    assert ryff_majorized(f, h)
