import numpy as np
import pytest

import oracles
from softeval import (
    AlignmentError,
    CONFIDENCE,
    KL_CLIP,
    KL_DIRECTION,
    SoftLabelMatrix,
    ValidationError,
    bernoulli_kld,
    bernoulli_kld_values,
    jackknife_from_leave_one_out,
    jackknife_mean,
    student_t_quantile,
)


def matrix(ids, classes, values):
    return SoftLabelMatrix(tuple(ids), tuple(classes), np.asarray(values, dtype=np.float64))


class TestBernoulliKld:
    def test_identical_is_zero(self):
        assert bernoulli_kld_values([0.3, 0.7, 0.5], [0.3, 0.7, 0.5]) == 0.0

    def test_single_cell_value(self):
        np.testing.assert_allclose(
            bernoulli_kld_values([0.5], [0.8]), oracles.KL_CELL_08_05, rtol=1e-14
        )

    def test_mean_over_cells(self):
        one = bernoulli_kld_values([0.5], [0.8])
        mixed = bernoulli_kld_values([0.5, 0.8], [0.8, 0.8])
        np.testing.assert_allclose(mixed, one / 2.0, rtol=1e-14)

    def test_asymmetric(self):
        assert bernoulli_kld_values([0.5], [0.9]) != bernoulli_kld_values([0.9], [0.5])

    def test_direction_reference_first_argument_of_log_ratio(self):
        # KL(ref || pred) with ref near certainty and a hedging prediction
        # must exceed the swapped call: mass the reference insists on is
        # weighted by the reference itself
        confident_ref = bernoulli_kld_values([0.5], [0.99])
        confident_pred = bernoulli_kld_values([0.99], [0.5])
        assert confident_ref > 0.0 and confident_pred > 0.0
        y, q = 0.99, 0.5
        expected = y * np.log(y / q) + (1 - y) * np.log((1 - y) / (1 - q))
        np.testing.assert_allclose(confident_ref, expected, rtol=1e-14)

    def test_exact_zero_one_stays_finite(self):
        v = bernoulli_kld_values([0.0], [1.0])
        assert np.isfinite(v)
        y = 1.0 - KL_CLIP
        q = KL_CLIP
        np.testing.assert_allclose(
            v, y * np.log(y / q) + (1 - y) * np.log((1 - y) / (1 - q)), rtol=1e-14
        )

    def test_nonnegative(self):
        rng = np.random.default_rng(67)
        for _ in range(300):
            n = rng.integers(1, 50)
            assert bernoulli_kld_values(rng.random(n), rng.random(n)) >= 0.0

    def test_empty_is_zero(self):
        assert bernoulli_kld_values([], []) == 0.0

    def test_matrix_wrapper_and_subset(self):
        pred = matrix(["i"], ["a", "b"], [[0.5, 0.8]])
        ref = matrix(["i"], ["a", "b"], [[0.8, 0.8]])
        np.testing.assert_allclose(bernoulli_kld(pred, ref), oracles.KL_CELL_08_05 / 2.0)
        np.testing.assert_allclose(
            bernoulli_kld(pred, ref, classes=["a"]), oracles.KL_CELL_08_05, rtol=1e-14
        )
        assert bernoulli_kld(pred, ref, classes=["b"]) == 0.0

    def test_matrix_wrapper_requires_item_alignment(self):
        pred = matrix(["i1", "i2"], ["a"], [[0.5], [0.5]])
        ref = matrix(["i2", "i1"], ["a"], [[0.5], [0.5]])
        with pytest.raises(AlignmentError):
            bernoulli_kld(pred, ref)

    def test_direction_tag(self):
        assert KL_DIRECTION == "KL(reference || prediction)"


class TestStudentTQuantile:
    def test_frozen_table(self):
        for df, expected in oracles.T_0975.items():
            assert abs(student_t_quantile(0.975, df) - expected) < 1e-9

    def test_decreasing_in_df(self):
        values = [student_t_quantile(0.975, df) for df in range(1, 201)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(v > 1.9599 for v in values)

    def test_median_is_zero(self):
        assert student_t_quantile(0.5, 7) == pytest.approx(0.0, abs=1e-12)

    def test_df_below_one_rejected(self):
        with pytest.raises(ValidationError):
            student_t_quantile(0.975, 0)


class TestJackknifeMean:
    def test_one_through_ten(self):
        s = jackknife_mean(np.arange(1.0, 11.0))
        assert s.estimate == 5.5
        assert s.n == 10
        assert s.confidence == CONFIDENCE
        np.testing.assert_allclose(s.standard_error, oracles.JK_1_10_SE, rtol=1e-12)
        # the t quantile comes from an iterative inversion accurate to ~1e-10
        np.testing.assert_allclose(s.ci_high - s.estimate, oracles.JK_1_10_HALF, rtol=1e-9)
        np.testing.assert_allclose(s.estimate - s.ci_low, oracles.JK_1_10_HALF, rtol=1e-9)

    def test_half_width_near_published_constant(self):
        s = jackknife_mean(np.arange(1.0, 11.0))
        assert abs((s.ci_high - s.ci_low) / 2.0 - 2.16593) < 1e-4

    def test_two_point_sample(self):
        s = jackknife_mean([0.0, 1.0])
        assert s.estimate == 0.5
        np.testing.assert_allclose(s.standard_error, oracles.JK_01_SE, rtol=1e-13)
        np.testing.assert_allclose(s.ci_high - s.estimate, oracles.JK_01_HALF, rtol=1e-9)

    def test_constant_observations_have_zero_width(self):
        s = jackknife_mean([0.4] * 8)
        assert s.estimate == pytest.approx(0.4)
        assert s.standard_error == 0.0
        assert s.ci_low == s.ci_high == s.estimate

    def test_matches_classical_formula(self):
        rng = np.random.default_rng(71)
        for _ in range(100):
            n = int(rng.integers(2, 40))
            obs = rng.random(n)
            s = jackknife_mean(obs)
            assert abs(s.estimate - np.mean(obs)) < 1e-12
            classical = np.std(obs, ddof=1) / np.sqrt(n)
            assert abs(s.standard_error - classical) < 1e-12
            half = student_t_quantile(0.975, n - 1) * classical
            assert abs((s.ci_high - s.ci_low) / 2.0 - half) < 1e-10

    def test_interval_brackets_estimate(self):
        rng = np.random.default_rng(73)
        for _ in range(100):
            s = jackknife_mean(rng.random(int(rng.integers(2, 20))))
            assert s.ci_low <= s.estimate <= s.ci_high

    def test_single_observation_rejected(self):
        with pytest.raises(ValidationError):
            jackknife_mean([0.5])


class TestJackknifeFromLeaveOneOut:
    def test_pseudo_value_arithmetic(self):
        # full statistic 0.6 on n=3 with leave-one-out values [0.5, 0.6, 0.7]
        # gives pseudo-values [0.8, 0.6, 0.4]
        s = jackknife_from_leave_one_out(0.6, [0.5, 0.6, 0.7])
        np.testing.assert_allclose(s.estimate, 0.6, rtol=1e-15)
        pseudo = np.array([0.8, 0.6, 0.4])
        np.testing.assert_allclose(
            s.standard_error, np.std(pseudo, ddof=1) / np.sqrt(3), rtol=1e-12
        )

    def test_consistent_with_mean_route(self):
        rng = np.random.default_rng(79)
        for _ in range(50):
            obs = rng.random(int(rng.integers(2, 15)))
            n = obs.size
            loo = [(obs.sum() - obs[k]) / (n - 1) for k in range(n)]
            direct = jackknife_mean(obs)
            via_loo = jackknife_from_leave_one_out(float(np.mean(obs)), loo)
            assert abs(direct.estimate - via_loo.estimate) < 1e-10
            assert abs(direct.standard_error - via_loo.standard_error) < 1e-10

    def test_needs_two_values(self):
        with pytest.raises(ValidationError):
            jackknife_from_leave_one_out(0.5, [0.5])
