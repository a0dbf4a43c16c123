import json

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from oracles import brute_gap
from rieszcalc import (BallGroup, ClusterOverflowError, Decomposition, DecompositionError, GapDecomposer, GapError,
                       decompose, example_counterexample, uniform_gap, verify_hypotheses)


class TestUniformGap:
    def test_progression(self):
        assert uniform_gap([1j, 2j, 3j]) == 1.0

    def test_counterexample_without_duplicate(self):
        _, s = example_counterexample(10, k_min=3)
        gap, pair = uniform_gap(s.eigenvalues, return_pair=True)
        assert gap == pytest.approx(1 / 10, abs=1e-14)

    def test_counterexample_duplicate_two_i(self):
        # blocks 1 and 2 both carry 2i, so the gap collapses to zero
        _, s = example_counterexample(10)
        gap, pair = uniform_gap(s.eigenvalues, return_pair=True)
        assert gap == 0.0
        assert s.eigenvalues[pair[0]] == s.eigenvalues[pair[1]] == 2j

    def test_duplicate(self):
        assert uniform_gap([1j, 1j]) == 0.0

    def test_too_few(self):
        with pytest.raises(GapError):
            uniform_gap([1j])


class TestDecompose:
    def test_isolated(self):
        d = decompose([1j, 2j, 3j], 1, 0.5)
        assert [g.members for g in d.groups] == [(0,), (1,), (2,)]
        assert d.min_inter_ball_gap >= 0.75

    def test_counterexample_k10(self):
        _, s = example_counterexample(10)
        d = decompose(s.eigenvalues, 2, 0.5)
        assert all(len(g.members) <= 2 for g in d.groups)
        # the duplicate 2i splits {2i, 2.5i} off as its own ball
        assert len(d.groups) == 11
        assert verify_hypotheses(d).passed

    def test_counterexample_k10_without_duplicate(self):
        _, s = example_counterexample(10, k_min=3)
        d = decompose(s.eigenvalues, 2, 0.5)
        assert len(d.groups) == 8
        for g, k in zip(d.groups, range(3, 11)):
            assert np.allclose(sorted(s.eigenvalues[list(g.members)].imag), [k, k + 1 / k])

    def test_overflow(self):
        with pytest.raises(ClusterOverflowError, match="cluster of size 3 exceeds K=2") as info:
            decompose([1j, 1.1j, 1.2j], 2, 0.15)
        assert info.value.size == 3

    def test_json(self):
        d = decompose([1j, 2j], 1, 0.5)
        out = json.loads(d.to_json())
        assert out["K"] == 1
        assert out["groups"][0]["center"] == [0.0, 1.0]

    def test_bad_merge_dist(self):
        with pytest.raises(ValueError):
            decompose([1j], 1, 0.0)


class TestVerifyHypotheses:
    def test_touching_balls_fail(self):
        groups = (BallGroup(0j, 0.5, (0,)), BallGroup(1j, 0.5, (1,)))
        rep = verify_hypotheses(Decomposition(groups, 1, (0j, 1j)))
        assert not rep.passed
        assert rep.min_gap == 0.0

    def test_single_ball(self):
        pts = [1j, 1.1j, 1.2j]
        d = decompose(pts, 10, 0.5)
        rep = verify_hypotheses(d)
        assert rep.passed and len(d.groups) == 1

    def test_uncovered_point_fails(self):
        groups = (BallGroup(0j, 0.1, (0,)),)
        assert not verify_hypotheses(Decomposition(groups, 1, (1j,))).passed


class TestEstimator:
    def test_fit_predict(self):
        est = GapDecomposer(K=2, merge_dist=0.5).fit([1j, 1.2j, 3j])
        assert list(est.labels_) == [0, 0, 1]
        assert list(est.predict([1.1j, 3j, 10j])) == [0, 1, -1]
        assert est.uniform_gap_ == pytest.approx(0.2)
        assert est.get_params() == {"K": 2, "merge_dist": 0.5}


# ---------------------------------------------------------------- properties

points = st.lists(st.complex_numbers(max_magnitude=6, allow_nan=False, allow_infinity=False)
                  .map(lambda z: complex(round(z.real, 3), round(z.imag, 3))),
                  min_size=2, max_size=12)


def _try_decompose(lam, K, m):
    try:
        return decompose(lam, K, m)
    except (ClusterOverflowError, DecompositionError):
        return None


@given(points, st.integers(1, 4), st.floats(0.05, 1.5), st.randoms(use_true_random=False))
def test_decompose_permutation_invariant(lam, K, m, rnd):
    perm = list(range(len(lam)))
    rnd.shuffle(perm)
    d1 = _try_decompose(lam, K, m)
    d2 = _try_decompose([lam[i] for i in perm], K, m)
    assert (d1 is None) == (d2 is None)
    assume(d1 is not None)

    def balls(d, vals):
        return sorted(tuple(sorted((vals[i].real, vals[i].imag) for i in g.members))
                      for g in d.groups)

    assert balls(d1, lam) == balls(d2, [lam[i] for i in perm])


@given(points, st.integers(1, 4), st.floats(0.05, 1.5))
def test_decompose_output_passes_hypotheses(lam, K, m):
    d = _try_decompose(lam, K, m)
    assume(d is not None)
    assert verify_hypotheses(d).passed


@given(points, st.integers(1, 4), st.floats(0.05, 1.5))
def test_center_gap_dominates_ball_gap(lam, K, m):
    d = _try_decompose(lam, K, m)
    assume(d is not None and len(d.groups) >= 2)
    centers = [g.center for g in d.groups]
    assert brute_gap(centers) >= d.min_inter_ball_gap - 1e-12


@given(points, st.integers(1, 4), st.floats(0.05, 1.5))
def test_single_linkage_separation(lam, K, m):
    d = _try_decompose(lam, K, m)
    assume(d is not None)
    labels = d.labels()
    arr = np.asarray(lam)
    dist = np.abs(arr[:, None] - arr[None, :])
    cross = labels[:, None] != labels[None, :]
    if cross.any():
        assert dist[cross].min() >= m


@given(points)
def test_uniform_gap_matches_brute_force(lam):
    assert uniform_gap(lam) == pytest.approx(brute_gap(lam), rel=1e-15)
