import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import oblique_projection, svd_frame_bounds
from rieszcalc import (GapError, ProjectionFamily, RieszReport, SpectrumError, block_groups,
                       counterexample_study, decompose, example_counterexample, example_jordan,
                       example_perturbed_skew, frame_bounds, pipeline_theorem_1_1,
                       pipeline_theorem_1_6, riesz_family_bounds, spectral_projection,
                       wermer_bound, wermer_scan)
from rieszcalc.riesz import chain_groups, subset_plan


def _unitary(seed, n):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestFrameBounds:
    def test_orthonormal(self):
        assert frame_bounds(np.eye(4)) == pytest.approx((1.0, 1.0))

    def test_counterexample_block(self):
        _, s = example_counterexample(3)
        m, _ = frame_bounds(s.chain_matrix().T)
        assert m == pytest.approx(1 - 3 / np.sqrt(10), rel=1e-12)

    def test_matches_lapack(self):
        _, s = example_perturbed_skew(6, 1.0, 0.3, 4)
        assert np.allclose(frame_bounds(s.chain_matrix().T), svd_frame_bounds(s.chain_matrix().T),
                           rtol=1e-12)

    def test_empty(self):
        with pytest.raises(ValueError):
            frame_bounds(np.zeros((0, 2)))


class TestFamily:
    def test_oblique_rank_one(self):
        _, s = example_counterexample(1)
        fam = ProjectionFamily.from_spectrum(s, [(0,), (1,)])
        ref = oblique_projection(s.chains[0].vectors[0], s.chains[1].vectors[0])
        assert np.allclose(fam.projection(0), ref, atol=1e-14)
        assert fam.ranks == (1, 1)
        assert fam.identity_defect() < 1e-14

    def test_from_matrices(self):
        _, s = example_perturbed_skew(4, 1.0, 0.2, 1)
        ref = ProjectionFamily.from_spectrum(s, [(0, 1), (2,), (3,)])
        fam = ProjectionFamily.from_matrices(ref.projections)
        assert fam.ranks == (2, 1, 1)
        assert np.allclose(fam.gram(), ref.gram(), atol=1e-12)

    def test_not_idempotent(self):
        with pytest.raises(ValueError, match="idempotent"):
            ProjectionFamily.from_matrices([2 * np.eye(2)])

    def test_groups_must_partition(self):
        _, s = example_counterexample(1)
        with pytest.raises(ValueError):
            ProjectionFamily.from_spectrum(s, [(0,)])

    def test_block_groups(self):
        _, s = example_counterexample(4)
        groups = block_groups(s, 2)
        assert groups == [(0, 1), (2, 3), (4, 5), (6, 7)]
        for k, g in enumerate(groups, start=1):
            assert sorted(s.eigenvalues[list(g)].imag) == pytest.approx([k, k + 1 / k])

    def test_chain_groups_split(self):
        _, s = example_jordan([(1j, 2), (3j, 1)])
        d = decompose([1j, 1j, 3j], 2, 0.5)
        assert chain_groups(s, d) == [(0,), (1,)]


class TestWermer:
    def test_subset_plan_exhaustive(self):
        subsets, exhaustive = subset_plan(3)
        assert exhaustive and len(subsets) == 7

    def test_subset_plan_sampled(self):
        subsets, exhaustive = subset_plan(20, budget=100, seed=1)
        assert not exhaustive and len(subsets) == 100
        assert len(set(subsets)) == 100
        assert subset_plan(20, budget=100, seed=1)[0] == subsets

    def test_orthogonal_family(self):
        fam = ProjectionFamily([np.eye(3)[:, [k]] for k in range(3)],
                               [np.eye(3)[:, [k]] for k in range(3)])
        m2, _ = wermer_bound(fam)
        assert m2 == pytest.approx(1.0)

    def test_counterexample_grows(self):
        _, s = example_counterexample(12)
        fam = ProjectionFamily.from_spectrum(s, [(k,) for k in range(len(s.chains))])
        m2, sub = wermer_bound(fam, budget=256)
        assert m2 >= 12


class TestProjectionPaths:
    def test_three_paths_agree(self):
        a, s = example_perturbed_skew(5, 1.0, 0.1, 0)
        exact = spectral_projection(a.entries, s, [1, 3])
        contour = spectral_projection(a.entries, s, [1, 3], method="contour")
        interp = spectral_projection(a.entries, s, [1, 3], method="interpolant")
        assert np.max(np.abs(contour - exact)) < 1e-10
        assert np.max(np.abs(interp - exact)) < 1e-6

    def test_jordan_group(self):
        a, s = example_jordan([(0.5j, 2), (-2j, 1)])
        exact = spectral_projection(a.entries, s, [0])
        assert np.allclose(exact @ exact, exact)
        contour = spectral_projection(a.entries, s, [0], method="contour")
        assert np.max(np.abs(contour - exact)) < 1e-10
        interp = spectral_projection(a.entries, s, [0], method="interpolant")
        assert np.max(np.abs(interp - exact)) < 1e-6

    def test_unknown_method(self):
        a, s = example_perturbed_skew(2, 1.0, 0.0, 0)
        with pytest.raises(ValueError, match="unknown method"):
            spectral_projection(a.entries, s, [0], method="svd")

    def test_bad_subset(self):
        a, s = example_perturbed_skew(2, 1.0, 0.0, 0)
        with pytest.raises(ValueError):
            spectral_projection(a.entries, s, [5])


class TestPipelines:
    def test_simple_pipeline_small(self):
        a, s = example_perturbed_skew(4, 1.0, 0.1, 3)
        rep = pipeline_theorem_1_1(a.entries, s)
        assert rep.passed and rep.exhaustive and rep.n_checked == 15
        v = s.chain_matrix()
        assert np.allclose((rep.frame_lower, rep.frame_upper), svd_frame_bounds(v.T), rtol=1e-10)
        assert set(rep.to_dict()) >= {"frame_lower", "wermer_M2", "passed", "interpolant_tol"}

    def test_simple_pipeline_duplicate(self):
        a, s = example_counterexample(3)
        with pytest.raises(GapError) as info:
            pipeline_theorem_1_1(a.entries, s)
        assert info.value.pair == (1, 2)

    def test_simple_pipeline_jordan(self):
        a, s = example_jordan([(1j, 2)])
        with pytest.raises(SpectrumError):
            pipeline_theorem_1_1(a.entries, s)

    def test_grouped_pipeline(self):
        a, s = example_counterexample(8, k_min=3)
        rep = pipeline_theorem_1_6(a.entries, s, K=2, merge_dist=0.5)
        assert rep.passed
        assert rep.family_lower == pytest.approx(1.0, abs=1e-10)
        assert rep.family_upper == pytest.approx(1.0, abs=1e-10)
        assert rep.ranks == (2,) * 6

    def test_report_rejects_negative(self):
        with pytest.raises(ValueError):
            RieszReport(-1.0, 1.0, 1.0, 1.0, 1.0, 0.0)


class TestCounterexampleStudy:
    def test_small(self):
        st_ = counterexample_study(10)
        assert st_.monotone
        k, pair_m, m = st_.rows[-1][:3]
        assert m == pytest.approx(1 - 10 / np.sqrt(101), rel=1e-10)
        assert st_.full_frame_lower == pytest.approx(m, rel=1e-8)
        assert st_.to_csv_rows()[0][0] == "k"


# ---------------------------------------------------------------- properties

skew = st.builds(lambda n, eps, seed: example_perturbed_skew(n, 1.0, eps, seed),
                 st.integers(2, 7), st.floats(0.0, 0.3), st.integers(0, 10_000))
corpus = st.one_of(skew, st.builds(example_counterexample, st.integers(1, 6)),
                   st.builds(lambda a, b: example_jordan([(1j, a), (-1j, b), (0.2 + 3j, 1)]),
                             st.integers(1, 2), st.integers(1, 2)))


@given(skew, st.data())
def test_projection_homomorphism(pair, data):
    _, s = pair
    n = len(s.chains)
    fam = ProjectionFamily.from_spectrum(s, [(k,) for k in range(n)])
    j1 = data.draw(st.sets(st.integers(0, n - 1)))
    j2 = data.draw(st.sets(st.integers(0, n - 1)))
    lhs = fam.subset_sum(j1) @ fam.subset_sum(j2)
    rhs = fam.subset_sum(sorted(j1 & j2))
    assert np.max(np.abs(lhs - rhs)) <= 1e-8


@given(corpus)
def test_projections_sum_to_identity(pair):
    _, s = pair
    fam = ProjectionFamily.from_spectrum(s, [(k,) for k in range(len(s.chains))])
    assert fam.identity_defect() <= 1e-8


@given(skew, st.integers(0, 10_000))
def test_frame_bounds_unitary_invariant(pair, seed):
    _, s = pair
    phi = s.chain_matrix()
    q = _unitary(seed, phi.shape[0])
    m, big_m = frame_bounds(phi.T)
    mq, big_mq = frame_bounds((q @ phi).T)
    assert mq == pytest.approx(m, abs=1e-10)
    assert big_mq == pytest.approx(big_m, abs=1e-10)


@given(st.integers(2, 7), st.sampled_from([0.0, 0.0, 0.05, 0.1, 0.3]), st.integers(0, 10_000))
def test_unit_bounds_iff_parseval(n, eps, seed):
    _, s = example_perturbed_skew(n, 1.0, eps, seed)
    q = _unitary(seed + 7, n)
    # a unitary change of basis keeps orthogonal families orthogonal
    phi = q @ s.chain_matrix()
    fam = ProjectionFamily([phi[:, [k]] for k in range(n)],
                           [np.linalg.inv(phi).conj().T[:, [k]] for k in range(n)])
    m1, big_m1 = riesz_family_bounds(fam)
    unit = abs(m1 - 1) <= 1e-8 and abs(big_m1 - 1) <= 1e-8
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((8, n)) + 1j * rng.standard_normal((8, n))
    parseval = all(
        abs(sum(np.linalg.norm(p @ x) ** 2 for p in fam.projections) - np.linalg.norm(x) ** 2)
        <= 1e-8 * np.linalg.norm(x) ** 2 for x in xs)
    assert unit == parseval
    assert unit == (eps == 0.0)


@given(corpus)
def test_wermer_dominates_single_norms(pair):
    _, s = pair
    fam = ProjectionFamily.from_spectrum(s, [(k,) for k in range(len(s.chains))])
    scan = wermer_scan(fam, budget=256)
    assert scan.exhaustive
    singles = [np.linalg.norm(p, 2) for p in fam.projections]
    assert scan.M2 >= max(singles) * (1 - 1e-10)


@given(st.integers(2, 150))
def test_monotone_degradation(k):
    study = counterexample_study(k, checkpoints=(k,))
    assert study.monotone
    assert study.rows[-1][2] == pytest.approx(1 - k / np.sqrt(k * k + 1), rel=1e-8)
    assert study.family_lower == pytest.approx(1.0, abs=1e-10)
    assert study.family_upper == pytest.approx(1.0, abs=1e-10)
