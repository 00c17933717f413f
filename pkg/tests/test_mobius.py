import numpy as np
import pytest

from sublevel_lab.mobius import (CURVATURE_BOUND, MapParams, apply_map,
                                 check_curvature, check_log_concavity,
                                 check_preimage_convexity,
                                 check_radial_profile, jacobian, log_jacobian,
                                 mobius_factor, mobius_factor_d1)

EIGHTH = MapParams(0.125)


class TestParams:
    def test_derived_quantities(self):
        assert EIGHTH.zero_sphere_radius_sq == pytest.approx(1 - 0.125 ** 3)
        assert EIGHTH.injectivity_radius_sq == pytest.approx(0.623046875)
        assert EIGHTH.injectivity_radius < EIGHTH.zero_sphere_radius < 1.0

    @pytest.mark.parametrize("delta", [0.0, -0.1, 0.2, 1.0])
    def test_delta_domain(self, delta):
        with pytest.raises(ValueError):
            MapParams(delta)


class TestMobiusFactor:
    def test_at_zero(self):
        assert mobius_factor(0.0, EIGHTH) == pytest.approx(
            EIGHTH.zero_sphere_radius_sq)

    def test_at_fixed_level(self):
        assert mobius_factor(EIGHTH.zero_sphere_radius_sq, EIGHTH) == 0.0

    def test_derived_value(self):
        got = mobius_factor(EIGHTH.injectivity_radius_sq, EIGHTH)
        assert got == pytest.approx(0.991617, abs=1e-6)

    def test_pole_guard(self):
        with pytest.raises(ValueError, match="pole"):
            mobius_factor(1.0 / EIGHTH.zero_sphere_radius_sq, EIGHTH)

    def test_involution_on_real_interval(self):
        rs = np.linspace(0.0, EIGHTH.injectivity_radius_sq, 1000)
        back = mobius_factor(mobius_factor(rs, EIGHTH), EIGHTH)
        assert np.max(np.abs(back - rs)) <= 1e-12


class TestApplyMap:
    def test_origin_fixed_direction(self):
        out = apply_map(np.zeros(3, dtype=complex), EIGHTH)
        np.testing.assert_array_equal(out, np.zeros(3, dtype=complex))

    def test_real_sphere_collapses(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(5)
        x *= EIGHTH.zero_sphere_radius / np.linalg.norm(x)
        out = apply_map(x.astype(complex), EIGHTH)
        assert np.max(np.abs(out)) <= 1e-12

    def test_image_radius_value(self):
        x = np.array([EIGHTH.injectivity_radius, 0.0], dtype=complex)
        out = apply_map(x, EIGHTH)
        assert np.linalg.norm(out) == pytest.approx(0.78271, abs=1e-5)

    def test_rejects_points_outside_ball(self):
        with pytest.raises(ValueError):
            apply_map(np.array([1.0 + 0j, 0.5]), EIGHTH)


class TestJacobian:
    def test_at_origin_collapses_to_power(self):
        a = EIGHTH.zero_sphere_radius_sq
        assert jacobian(0.0, 3, EIGHTH) == pytest.approx(a ** 3)

    def test_at_injectivity_radius(self):
        # independent arithmetic: m(R0), m'(R0) combined by hand
        r0sq = EIGHTH.injectivity_radius_sq
        m = float(mobius_factor(r0sq, EIGHTH))
        m1 = float(mobius_factor_d1(r0sq, EIGHTH))
        expected = (m + 2 * r0sq * m1) * m ** 2
        got = jacobian(EIGHTH.injectivity_radius, 3, EIGHTH)
        assert got == pytest.approx(expected, rel=1e-14)
        assert got == pytest.approx(0.94163, abs=1e-5)

    def test_dimension_one_is_radial_factor(self):
        rs = np.linspace(0.0, EIGHTH.injectivity_radius, 50)
        R = rs * rs
        expected = mobius_factor(R, EIGHTH) + 2 * R * mobius_factor_d1(R, EIGHTH)
        np.testing.assert_array_equal(jacobian(rs, 1, EIGHTH), expected)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            jacobian(EIGHTH.injectivity_radius + 0.01, 2, EIGHTH)

    @pytest.mark.parametrize("n", [1, 2, 8, 64])
    def test_positive(self, n):
        rs = np.linspace(0.0, EIGHTH.injectivity_radius, 2000)
        assert np.all(jacobian(rs, n, EIGHTH) > 0.0)

    @pytest.mark.parametrize("n", [2, 5, 64])
    def test_factorization_identity_exact(self, n):
        rs = np.linspace(0.0, EIGHTH.injectivity_radius, 500)
        m = mobius_factor(rs * rs, EIGHTH)
        lhs = jacobian(rs, n, EIGHTH)
        rhs = jacobian(rs, 1, EIGHTH) * m ** (n - 1)
        np.testing.assert_array_equal(lhs, rhs)


class TestRadialProfile:
    @pytest.mark.parametrize("delta", [1 / 32, 1 / 16, 1 / 8])
    def test_passes(self, delta):
        rep = check_radial_profile(MapParams(delta), 2001)
        assert rep.passed
        assert rep.statistic > 0.0
        assert rep.extras["image_radius"] > 1 - 2 * delta

    def test_reported_values_for_eighth(self):
        rep = check_radial_profile(EIGHTH, 2001)
        assert rep.extras["image_radius"] == pytest.approx(0.78271, abs=1e-5)
        assert rep.extras["max_logderiv_ratio"] == pytest.approx(0.0275, abs=1e-3)
        assert rep.extras["max_logderiv_ratio"] <= 1 / 30

    def test_small_delta_image_radius(self):
        rep = check_radial_profile(MapParams(1 / 32), 2001)
        assert rep.extras["image_radius"] > 1 - 1 / 16

    def test_row_schema(self):
        row = check_radial_profile(EIGHTH, 101).to_row()
        assert set(row) == {"check", "delta", "n", "seed", "statistic",
                            "bound", "pass"}


class TestCurvature:
    @pytest.mark.parametrize("delta", [1 / 32, 1 / 16, 1 / 8])
    def test_bound(self, delta):
        rep = check_curvature(MapParams(delta), 2001, 181)
        assert rep.passed
        assert rep.statistic <= CURVATURE_BOUND + 1e-6

    def test_radial_lines_are_straight(self):
        # alpha = 0: sigma' and sigma'' are parallel, curvature 0
        params = EIGHTH
        rep = check_curvature(params, 101, 2)
        # grid includes alpha=0 and alpha=pi rows only; both radial
        assert rep.statistic <= 1e-12

    def test_zero_radius_no_bending(self):
        r0 = EIGHTH.injectivity_radius
        R = 0.0
        m = float(mobius_factor(R, EIGHTH))
        # sigma''(0) carries a factor r; at r=0 cross product vanishes
        assert m > 0
        rep = check_curvature(EIGHTH, 2, 91)  # r grid {0, r0}
        assert rep.passed


class TestLogConcavity:
    def test_passes_dimension_two(self):
        rep = check_log_concavity(EIGHTH, 2, 20_000, seed=11)
        assert rep.passed
        assert rep.statistic >= -1e-9

    def test_midpoint_identity(self):
        r = 0.3
        d = log_jacobian(r, 4, EIGHTH) - log_jacobian(r, 4, EIGHTH)
        assert d == 0.0

    def test_radial_triple_second_difference(self):
        r0 = EIGHTH.injectivity_radius
        rs = np.array([0.0, r0 / 2, r0])
        vals = np.log(jacobian(rs, 1, EIGHTH))
        assert vals[0] - 2 * vals[1] + vals[2] <= 0.0

    def test_second_difference_grid(self):
        rep = check_log_concavity(EIGHTH, 1, 1000, seed=2)
        assert rep.extras["max_second_diff_factor"] <= 1e-12
        assert rep.extras["max_second_diff_radial"] <= 1e-12


class TestPreimageConvexity:
    def test_centered_ball(self):
        rep = check_preimage_convexity(EIGHTH, 0.0, 0.5, 2000, seed=4)
        assert rep.passed
        assert rep.statistic == 0.0

    def test_near_boundary_ball(self):
        rep = check_preimage_convexity(EIGHTH, 0.5, 0.28, 2000, seed=4)
        assert rep.passed

    def test_degenerate_radius(self):
        rep = check_preimage_convexity(EIGHTH, 0.2, 0.0, 100, seed=4)
        assert rep.passed

    def test_ball_outside_image_rejected(self):
        with pytest.raises(ValueError, match="inside the image"):
            check_preimage_convexity(EIGHTH, 0.6, 0.3, 100, seed=4)

    def test_deterministic_in_seed(self):
        a = check_preimage_convexity(EIGHTH, 0.3, 0.2, 1000, seed=9)
        b = check_preimage_convexity(EIGHTH, 0.3, 0.2, 1000, seed=9)
        assert a.extras["pairs_checked"] == b.extras["pairs_checked"]
        assert a.statistic == b.statistic


def test_log_concavity_deterministic_across_threads():
    a = check_log_concavity(EIGHTH, 3, 70_000, seed=21, threads=1)
    b = check_log_concavity(EIGHTH, 3, 70_000, seed=21, threads=4)
    assert a.statistic == b.statistic


def test_paper_constant_chain_for_eighth():
    # the derivative-ratio chain: (1-A^2)/(A-R)^2 <= 2 delta / 9 < 1/30
    A = EIGHTH.zero_sphere_radius_sq
    R0 = EIGHTH.injectivity_radius_sq
    lhs = (1 - A * A) / (A - R0) ** 2
    assert lhs <= 2 * 0.125 / 9 + 1e-15
    assert 2 * 0.125 / 9 < 1 / 30
