import math

import numpy as np
import pytest

from sublevel_lab.poly import from_terms, lift, normalize
from sublevel_lab.volume import (BallSpec, check_quantile_bounds,
                                 check_superlevel_power_bound, level_fraction,
                                 modulus_quantile, sample_ball, sample_moduli,
                                 sigma_exponent)

HALF_SHIFT = normalize(from_terms(1, {(0,): 0.5, (1,): 0.5}))
IDENTITY_1D = normalize(from_terms(1, {(1,): 1.0}))
SQUARE_1D = normalize(from_terms(1, {(2,): 1.0}))
INTERVAL_HALF = BallSpec(np.zeros(1), 0.5, 0.25)


class TestBallSpec:
    def test_epsilon_domain(self):
        with pytest.raises(ValueError, match="epsilon"):
            BallSpec(np.zeros(2), 0.5, 0.3)
        with pytest.raises(ValueError, match="epsilon"):
            BallSpec(np.zeros(2), 0.5, 0.0)

    def test_containment(self):
        with pytest.raises(ValueError, match="inside"):
            BallSpec(np.array([0.5, 0.0]), 0.3, 0.25)
        BallSpec(np.array([0.05, 0.0]), 0.7, 0.25)  # boundary case is fine


class TestSampleBall:
    def test_mean_abs_interval(self):
        pts = sample_ball(INTERVAL_HALF, 100_000, seed=1)
        mean = float(np.mean(np.abs(pts)))
        se = 0.5 / math.sqrt(12 * 100_000)  # std of |U(-r,r)| ~ r/sqrt(12)
        assert abs(mean - 0.25) <= 5 * se

    def test_degenerate_radius(self):
        spec = BallSpec(np.array([0.1, 0.2]), 0.0, 0.25)
        pts = sample_ball(spec, 1000, seed=2)
        assert np.allclose(pts, [0.1, 0.2])

    def test_radius_moment_dimension_eight(self):
        spec = BallSpec(np.zeros(8), 0.7, 0.25)
        pts = sample_ball(spec, 100_000, seed=3)
        ratio = float(np.mean(np.sum(pts ** 2, axis=1))) / 0.49
        # E r^2 / R^2 = n/(n+2) = 0.8
        assert abs(ratio - 0.8) <= 5 * 0.5 / math.sqrt(100_000)

    def test_points_inside_ball(self):
        spec = BallSpec(np.array([0.1, -0.1, 0.0]), 0.6, 0.25)
        pts = sample_ball(spec, 10_000, seed=4)
        assert np.max(np.linalg.norm(pts - spec.center, axis=1)) <= 0.6

    def test_deterministic_across_threads(self):
        spec = BallSpec(np.zeros(3), 0.5, 0.25)
        a = sample_ball(spec, 200_000, seed=5, threads=1)
        b = sample_ball(spec, 200_000, seed=5, threads=4)
        np.testing.assert_array_equal(a, b)


class TestQuantile:
    def test_identity_closed_form(self):
        est = modulus_quantile(IDENTITY_1D, INTERVAL_HALF, 200_000, seed=11)
        expected = (1 - 1 / math.e) / 2
        assert abs(est.value - expected) <= 4 * est.std_err

    def test_square_closed_form(self):
        est = modulus_quantile(SQUARE_1D, INTERVAL_HALF, 200_000, seed=12)
        expected = ((1 - 1 / math.e) / 2) ** 2
        assert abs(est.value - expected) <= 4 * est.std_err
        assert est.value == pytest.approx(0.09990, abs=2e-3)

    def test_constant_rejected(self):
        const = normalize(from_terms(1, {(0,): 1.0}))
        with pytest.raises(ValueError, match="constant"):
            modulus_quantile(const, INTERVAL_HALF, 1000, seed=1)

    def test_missing_certificate_rejected(self):
        p = from_terms(1, {(1,): 1.0})
        with pytest.raises(ValueError, match="certificate"):
            modulus_quantile(p, INTERVAL_HALF, 1000, seed=1)


class TestLevelFraction:
    def test_zero_threshold(self):
        frac, _ = level_fraction(HALF_SHIFT, BallSpec(np.zeros(1), 0.7, 0.25),
                                 0.0, "ge", 10_000, seed=7)
        assert frac == 1.0

    def test_above_certificate(self):
        frac, _ = level_fraction(HALF_SHIFT, BallSpec(np.zeros(1), 0.7, 0.25),
                                 1.0 + 1e-9, "ge", 10_000, seed=7)
        assert frac == 0.0

    def test_identity_median(self):
        frac, se = level_fraction(IDENTITY_1D, INTERVAL_HALF, 0.25, "le",
                                  100_000, seed=8)
        assert abs(frac - 0.5) <= 4 * se

    def test_quantile_self_consistency(self):
        est = modulus_quantile(IDENTITY_1D, INTERVAL_HALF, 100_000, seed=21)
        frac, se = level_fraction(IDENTITY_1D, INTERVAL_HALF, est.value, "ge",
                                  100_000, seed=22)
        assert abs(frac - 1 / math.e) <= 3 * (se + est.std_err)


class TestSigma:
    def test_half_shift_value(self):
        sigma = sigma_exponent(HALF_SHIFT, 0.25)
        assert sigma == pytest.approx(3072 * math.log(2.0), rel=1e-12)
        assert sigma == pytest.approx(2129.35, abs=0.01)

    def test_zero_constant_term_rejected(self):
        with pytest.raises(ValueError, match="undefined"):
            sigma_exponent(IDENTITY_1D, 0.25)

    def test_unimodular_constant_rejected(self):
        p = normalize(from_terms(1, {(0,): 1.0}))
        with pytest.raises(ValueError):
            sigma_exponent(p, 0.25)

    def test_dimension_free(self):
        sig1 = sigma_exponent(HALF_SHIFT, 0.25)
        for n in (2, 4, 8, 16):
            assert sigma_exponent(lift(HALF_SHIFT, n), 0.25) == sig1


class TestQuantileBounds:
    def test_half_shift_two_dims(self):
        p = lift(HALF_SHIFT, 2)
        spec = BallSpec(np.zeros(2), 0.7, 0.25)
        rep = check_quantile_bounds(p, spec, [1.5, 2.0, 4.0, 8.0],
                                    100_000, seed=31)
        assert rep.all_pass
        assert rep.sigma == pytest.approx(3072 * math.log(2.0), rel=1e-12)
        # thresholds are astronomically slack: empirical fractions vanish
        for row in rep.rows:
            assert row.small_fraction == 0.0
            assert row.tail_fraction == 0.0

    def test_lambda_one_trivial(self):
        rep = check_quantile_bounds(HALF_SHIFT,
                                    BallSpec(np.zeros(1), 0.7, 0.25),
                                    [1.0], 20_000, seed=32)
        assert rep.rows[0].small_bound == 1.0
        assert rep.all_pass

    def test_large_lambda_tail(self):
        rep = check_quantile_bounds(HALF_SHIFT,
                                    BallSpec(np.zeros(1), 0.7, 0.25),
                                    [50.0], 50_000, seed=33)
        assert rep.all_pass
        assert rep.rows[0].tail_fraction == 0.0

    def test_invalid_lambda(self):
        with pytest.raises(ValueError):
            check_quantile_bounds(HALF_SHIFT,
                                  BallSpec(np.zeros(1), 0.7, 0.25),
                                  [0.5], 10_000, seed=1)


class TestSuperlevelPowerBound:
    def test_lambda_one_monotone(self):
        spec = BallSpec(np.zeros(1), 0.7, 0.25)
        rep = check_superlevel_power_bound(HALF_SHIFT, spec, 0.3, [1.0],
                                           50_000, seed=41)
        assert rep.all_pass

    def test_threshold_above_maximum(self):
        spec = BallSpec(np.zeros(1), 0.7, 0.25)
        rep = check_superlevel_power_bound(HALF_SHIFT, spec, 2.0, [2.0],
                                           20_000, seed=42)
        assert rep.rows[0].lhs == 0.0
        assert rep.all_pass

    def test_at_reference_quantile_matches_tail_row(self):
        spec = BallSpec(np.zeros(1), 0.7, 0.25)
        qb = check_quantile_bounds(HALF_SHIFT, spec, [2.0], 50_000, seed=43)
        sf = check_superlevel_power_bound(HALF_SHIFT, spec, qb.quantile,
                                          [2.0], 50_000, seed=43)
        # same seed, same stream: identical samples, identical tail fraction
        assert sf.rows[0].lhs == qb.rows[0].tail_fraction
        assert sf.all_pass


class TestScaleCoherence:
    def test_unimodular_rotation_bitwise(self):
        spec = BallSpec(np.zeros(1), 0.7, 0.25)
        p = HALF_SHIFT
        q = from_terms(1, {(0,): -0.5, (1,): -0.5})  # u = -1 times p
        q = normalize(q)
        a = sample_moduli(p, spec, 50_000, seed=51)
        b = sample_moduli(q, spec, 50_000, seed=51)
        np.testing.assert_array_equal(a.sorted_moduli, b.sorted_moduli)


def test_reports_deterministic_across_threads_and_runs():
    spec = BallSpec(np.zeros(2), 0.7, 0.25)
    p = lift(HALF_SHIFT, 2)
    a = check_quantile_bounds(p, spec, [2.0, 4.0], 150_000, seed=61, threads=1)
    b = check_quantile_bounds(p, spec, [2.0, 4.0], 150_000, seed=61, threads=3)
    assert a.quantile == b.quantile
    for ra, rb in zip(a.rows, b.rows):
        assert ra == rb
