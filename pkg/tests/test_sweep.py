import numpy as np
import pytest

from softeval import (
    ConfigError,
    SoftLabelMatrix,
    SweepConfig,
    beta_r_sweep,
    decimal_grid,
    epsilon_sweep,
    make_synthetic_reference,
    run_sweep,
)


def closed_form_soft_f(eps):
    return 2.0 * (1.0 + min(0.0, eps)) / (2.0 + eps)


class TestDecimalGrid:
    def test_hundredths_are_exact(self):
        grid = decimal_grid("-0.2", "0.7", "0.01")
        assert len(grid) == 91
        assert grid[0] == -0.2
        assert grid[-1] == 0.7
        # 0.3 must be the float nearest 0.3, not an accumulated drift like
        # -0.2 + 50 * 0.01
        assert grid[50] == 0.3
        assert 0.2 + grid[50] == 0.5

    def test_inclusive_endpoint_only_when_hit(self):
        assert decimal_grid("0", "1", "0.4") == (0.0, 0.4, 0.8)

    def test_single_point(self):
        assert decimal_grid("0.5", "0.5", "0.1") == (0.5,)

    def test_bad_step(self):
        with pytest.raises(ConfigError):
            decimal_grid("0", "1", "0")

    def test_reversed_bounds(self):
        with pytest.raises(ConfigError):
            decimal_grid("1", "0", "0.1")

    def test_unparseable(self):
        with pytest.raises(ConfigError):
            decimal_grid("zero", "1", "0.1")


class TestSweepConfig:
    def test_valid(self):
        config = SweepConfig(mode="epsilon", grid=(0.0, 0.1))
        assert config.anchor == 0.8 and config.base == 0.2

    def test_unknown_mode(self):
        with pytest.raises(ConfigError, match="sweep mode"):
            SweepConfig(mode="gamma", grid=(0.1,))

    def test_empty_grid(self):
        with pytest.raises(ConfigError, match="empty"):
            SweepConfig(mode="epsilon", grid=())

    def test_non_increasing_grid(self):
        with pytest.raises(ConfigError, match="strictly increasing"):
            SweepConfig(mode="epsilon", grid=(0.2, 0.1))

    def test_anchor_out_of_range(self):
        with pytest.raises(ConfigError, match="anchor"):
            SweepConfig(mode="epsilon", grid=(0.1,), anchor=1.2)

    def test_bad_n_items(self):
        with pytest.raises(ConfigError, match="n_items"):
            SweepConfig(mode="beta_r", grid=(1.0,), n_items=0)


class TestEpsilonSweep:
    def test_zero_offset_is_perfect(self):
        (p,) = epsilon_sweep([0.0])
        assert p.soft_f == 1.0
        assert p.hard_f == 1.0
        assert p.kld == 0.0

    def test_positive_offset_drops_precision_only(self):
        (p,) = epsilon_sweep([0.5])
        np.testing.assert_allclose(p.soft_f, 0.8, rtol=1e-15)
        assert p.soft_recall == 1.0
        assert p.soft_precision < 1.0
        assert p.hard_f == 2.0 / 3.0

    def test_negative_offset_drops_recall_only(self):
        (p,) = epsilon_sweep([-0.1])
        np.testing.assert_allclose(p.soft_f, closed_form_soft_f(-0.1), rtol=1e-12)
        np.testing.assert_allclose(p.soft_f, 2 * 0.9 / 1.9, rtol=1e-12)
        assert p.soft_precision == 1.0
        assert p.soft_recall < 1.0
        assert p.hard_f == 1.0

    def test_closed_form_across_grid(self):
        grid = decimal_grid("-0.2", "0.7", "0.01")
        points = epsilon_sweep(grid)
        for p in points:
            assert abs(p.soft_f - closed_form_soft_f(p.epsilon)) < 1e-12
            assert p.hard_f == (1.0 if p.epsilon <= 0.3 else 2.0 / 3.0)

    def test_peak_at_zero(self):
        grid = decimal_grid("-0.2", "0.7", "0.01")
        points = epsilon_sweep(grid)
        best = max(points, key=lambda p: p.soft_f)
        assert best.epsilon == 0.0

    def test_threshold_boundary_is_exact(self):
        # at eps = 0.3 the perturbed prediction equals the threshold and the
        # strict rule keeps it negative, so hard F is still 1
        (p,) = epsilon_sweep([0.3])
        assert p.hard_f == 1.0
        (p,) = epsilon_sweep([0.31])
        assert p.hard_f == 2.0 / 3.0

    def test_out_of_range_epsilon_rejected(self):
        with pytest.raises(ConfigError, match="outside"):
            epsilon_sweep([0.9])
        with pytest.raises(ConfigError, match="outside"):
            epsilon_sweep([-0.3])


class TestMakeSyntheticReference:
    def test_shape_and_names(self):
        ref = make_synthetic_reference(100, n_classes=4, seed=0)
        assert ref.n_items == 100
        assert ref.class_names == ("class_01", "class_02", "class_03", "class_04")

    def test_deterministic(self):
        a = make_synthetic_reference(50, seed=3)
        b = make_synthetic_reference(50, seed=3)
        assert a == b
        assert a != make_synthetic_reference(50, seed=4)

    def test_every_class_scorable_after_binarization(self):
        ref = make_synthetic_reference(500, seed=0).binarized(0.5)
        for name in ref.class_names:
            column = ref.column(name)
            assert column.sum() > 0
            assert column.sum() < column.size

    def test_custom_class_names(self):
        ref = make_synthetic_reference(10, seed=0, class_names=["x", "y"])
        assert ref.class_names == ("x", "y")


class TestBetaRSweep:
    def test_rows_and_determinism(self):
        ref = make_synthetic_reference(300, seed=1)
        points = beta_r_sweep([0.1, 1.0, 5.0], ref, seed=7, constant=0.5)
        assert [p.kind for p in points] == ["beta", "beta", "beta", "constant"]
        assert [p.parameter for p in points] == [0.1, 1.0, 5.0, 0.5]
        again = beta_r_sweep([0.1, 1.0, 5.0], ref, seed=7, constant=0.5)
        assert points == again
        assert points != beta_r_sweep([0.1, 1.0, 5.0], ref, seed=8, constant=0.5)

    def test_scores_within_range(self):
        ref = make_synthetic_reference(200, seed=2)
        for p in beta_r_sweep([0.5, 2.0], ref, seed=0):
            for v in (
                p.soft_f_micro,
                p.soft_f_macro,
                p.hard_f_micro,
                p.hard_f_macro,
                p.ot_f_micro,
                p.ot_f_macro,
            ):
                assert 0.0 <= v <= 1.0
            assert p.kld >= 0.0

    def test_tuned_dominates_fixed(self):
        ref = make_synthetic_reference(400, seed=3)
        for p in beta_r_sweep([0.1, 1.0, 20.0], ref, seed=0):
            assert p.ot_f_macro >= p.hard_f_macro - 1e-12

    def test_kld_decreases_toward_middle_r(self):
        # a soft reference with moderate means is closer to Beta(20,20)
        # predictions (mass near 0.5) than to Beta(0.01,...) coin flips
        ref = make_synthetic_reference(2000, seed=4)
        points = beta_r_sweep([0.01, 20.0], ref, seed=0)
        assert points[0].kld > points[1].kld

    def test_nonpositive_r_rejected(self):
        ref = make_synthetic_reference(10, seed=0)
        with pytest.raises(ConfigError):
            beta_r_sweep([0.0, 1.0], ref)

    def test_empty_grid_rejected(self):
        ref = make_synthetic_reference(10, seed=0)
        with pytest.raises(ConfigError):
            beta_r_sweep([], ref)


class TestRunSweep:
    def test_epsilon_dispatch(self):
        config = SweepConfig(mode="epsilon", grid=(0.0, 0.1))
        points = run_sweep(config)
        assert [p.epsilon for p in points] == [0.0, 0.1]

    def test_beta_r_dispatch_synthesizes_reference(self):
        config = SweepConfig(mode="beta_r", grid=(1.0,), n_items=50, seed=9)
        points = run_sweep(config, constant=0.5)
        assert len(points) == 2
        ref = make_synthetic_reference(50, seed=9)
        direct = beta_r_sweep((1.0,), ref, seed=9, constant=0.5)
        assert points == direct
