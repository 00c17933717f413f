import math

import numpy as np
import pytest

from sublevel_lab.intervals import IntervalSet
from sublevel_lab.remez import (DiskFunction, blaschke_log_abs,
                                classical_remez_check, eval_disk_function,
                                factor_bounds, format_disk_function,
                                log_abs_f, parse_disk_function, remez_check,
                                remez_exponent, split_criterion, split_zeros,
                                symmetric_exponent, sup_log_abs_on_set)

EMPTY = np.array([], dtype=complex)


def make_f(zeros=(), atoms=(), const=1.0):
    locs = np.array([np.exp(1j * t) for t, _ in atoms], dtype=complex)
    ws = np.array([w for _, w in atoms], dtype=float)
    return DiskFunction(np.array(zeros, dtype=complex), locs, ws, const)


ATOM_F = make_f(atoms=[(0.0, 0.1)])          # single atom at zeta=1, w=0.1
SINGLE_ZERO = make_f(zeros=[0.0])            # f(z) = z up to the constant


def random_disk_function(rng, max_zeros=30, max_atoms=5):
    n_zeros = int(rng.integers(0, max_zeros + 1))
    radii = np.sqrt(rng.random(n_zeros)) * 0.995
    zeros = radii * np.exp(1j * rng.random(n_zeros) * 2 * np.pi)
    n_atoms = int(rng.integers(0, max_atoms + 1))
    locs = np.exp(1j * rng.random(n_atoms) * 2 * np.pi)
    ws = rng.random(n_atoms) * 0.5 + 1e-3
    const = np.exp(1j * rng.random() * 2 * np.pi)
    return DiskFunction(zeros, locs, ws, const)


class TestEval:
    def test_empty_product_is_one(self):
        f = make_f()
        assert eval_disk_function(f, 0.3 + 0.1j) == pytest.approx(1.0)

    def test_single_zero_at_origin(self):
        assert abs(eval_disk_function(SINGLE_ZERO, 0.7)) == pytest.approx(0.7)

    def test_atom_kernel_value(self):
        # (1 - x^2)/(1 - x)^2 = 19 at x = 0.9
        got = abs(eval_disk_function(ATOM_F, 0.9))
        assert got == pytest.approx(math.exp(-1.9), rel=1e-12)

    def test_outside_disk_rejected(self):
        with pytest.raises(ValueError):
            eval_disk_function(ATOM_F, 1.0)
        with pytest.raises(ValueError):
            log_abs_f(ATOM_F, np.array([1.2]))

    def test_modulus_bounded_by_one(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            f = random_disk_function(rng)
            z = (rng.random() * 0.98) * np.exp(1j * rng.random() * 2 * np.pi)
            assert abs(eval_disk_function(f, z)) <= 1 + 1e-12

    def test_log_abs_matches_eval(self):
        rng = np.random.default_rng(8)
        f = random_disk_function(rng)
        zs = (rng.random(20) * 0.9) * np.exp(1j * rng.random(20) * 2 * np.pi)
        logs = log_abs_f(f, zs)
        direct = np.array([abs(eval_disk_function(f, z)) for z in zs])
        np.testing.assert_allclose(np.exp(logs), direct, rtol=1e-10)

    def test_zero_invariants_enforced(self):
        with pytest.raises(ValueError):
            make_f(zeros=[1.0])
        with pytest.raises(ValueError):
            DiskFunction(EMPTY, np.array([0.5 + 0j]), np.array([1.0]))
        with pytest.raises(ValueError):
            DiskFunction(EMPTY, EMPTY, np.array([]), const=2.0)


class TestSplit:
    def test_zero_at_origin_is_short_factor(self):
        fac = split_zeros([0.0], 0.9)
        assert fac.n_b2 == 1
        assert fac.b1_zeros.size == 0

    def test_near_boundary_imaginary_zero_is_tame(self):
        val = split_criterion(np.array([0.999j]), 0.9)[0]
        assert val == pytest.approx(0.0022, abs=2e-4)
        fac = split_zeros([0.999j], 0.9)
        assert fac.b1_zeros.size == 1

    def test_near_boundary_real_zero_is_short(self):
        val = split_criterion(np.array([0.99 + 0j]), 0.9)[0]
        assert val == pytest.approx(1.68, abs=0.01)
        fac = split_zeros([0.99 + 0j], 0.9)
        assert fac.n_b2 == 1

    def test_partition(self):
        rng = np.random.default_rng(12)
        f = random_disk_function(rng)
        fac = split_zeros(f.zeros, 0.8)
        assert fac.b1_zeros.size + fac.b2_zeros.size == f.zeros.size


class TestFactorBounds:
    def test_atom_example(self):
        rep = factor_bounds(ATOM_F, 0.9)
        assert rep.outer_min == pytest.approx(math.exp(-1.9), rel=1e-9)
        assert rep.outer_min_bound == pytest.approx(
            math.exp(-(1.9 + 0.1 / 19) / 0.19), rel=1e-6)
        assert rep.all_pass

    def test_single_zero_count_bound(self):
        rep = factor_bounds(SINGLE_ZERO, 0.9)
        assert rep.n_b2 == 1
        assert rep.n_b2_bound == pytest.approx(3 / 0.19 * math.log(1 / 0.81),
                                               rel=1e-9)
        assert rep.all_pass

    def test_trivial_function_equalities(self):
        rep = factor_bounds(make_f(), 0.7)
        assert rep.outer_min == 1.0
        assert rep.b1_min == 1.0
        assert rep.n_b2 == 0
        assert rep.r_ratio == 1.0
        assert rep.all_pass

    def test_randomized(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            f = random_disk_function(rng)
            a = float(rng.uniform(0.5, 0.99))
            assert factor_bounds(f, a, grid=2001).all_pass


class TestKernelDomination:
    @pytest.mark.parametrize("a", [0.5, 0.9, 0.99])
    def test_grid(self, a):
        thetas = np.linspace(0.0, 2 * np.pi, 10_000, endpoint=False)
        zetas = np.exp(1j * thetas)
        xs = np.linspace(-a, a, 401)
        lhs = 1.0 / np.abs(1.0 - xs[:, None] * zetas[None, :]) ** 2
        rhs = (1.0 / np.abs(1.0 - a * zetas) ** 2
               + 1.0 / np.abs(1.0 + a * zetas) ** 2)[None, :]
        assert np.all(lhs <= rhs + 1e-12)


class TestPerFactorBounds:
    def test_tame_factor_lower_bound(self):
        rng = np.random.default_rng(5)
        a = 0.9
        xs = np.linspace(-a, a, 1001)
        found = 0
        while found < 20:
            z = (np.sqrt(rng.random()) * 0.995
                 * np.exp(1j * rng.random() * 2 * np.pi))
            if split_criterion(np.array([z]), a)[0] > 2 / 3:
                continue
            found += 1
            log_b = blaschke_log_abs(np.array([z]), xs)
            log_ba = blaschke_log_abs(np.array([z]), np.array([a, -a]))
            bound = (log_ba[0] + log_ba[1]) * 2 * (1 - xs ** 2) / (1 - a * a)
            assert np.all(np.exp(log_b) >= np.exp(bound) - 1e-12)

    def test_short_factor_decay(self):
        rng = np.random.default_rng(6)
        a = 0.8
        found = 0
        while found < 20:
            z = (np.sqrt(rng.random()) * 0.995
                 * np.exp(1j * rng.random() * 2 * np.pi))
            if split_criterion(np.array([z]), a)[0] <= 2 / 3:
                continue
            found += 1
            log_ba = blaschke_log_abs(np.array([z]), np.array([a, -a]))
            val = np.exp(2 * (log_ba[0] + log_ba[1]))
            assert val <= math.exp(-2 * (1 - a * a) / 3) + 1e-12


class TestExponent:
    def test_single_zero(self):
        assert remez_exponent(SINGLE_ZERO, 0.9) == pytest.approx(
            3 / 0.1 * math.log(1 / 0.81), rel=1e-12)

    def test_unimodular_function(self):
        assert remez_exponent(make_f(), 0.9) == 0.0

    def test_atom_product_form(self):
        # product form 3/(1-a) * (1.9 + 1/190); the symmetric single-value
        # form would halve the first term
        expected = 30 * (1.9 + 0.1 / 19)
        assert remez_exponent(ATOM_F, 0.9) == pytest.approx(expected, rel=1e-12)
        assert symmetric_exponent(ATOM_F, 0.9) == pytest.approx(30 * 1.9,
                                                                rel=1e-12)

    def test_vanishing_endpoint_rejected(self):
        f = make_f(zeros=[0.9])
        with pytest.raises(ValueError):
            remez_exponent(f, 0.9)


class TestRemezCheck:
    def test_monotone_modulus_example(self):
        e = IntervalSet.from_pairs([(0.0, 0.09)])
        rep = remez_check(SINGLE_ZERO, 0.9, (0.0, 0.9), e, 10_001, 301)
        assert rep.passed
        assert rep.max_i == pytest.approx(0.9, rel=1e-9)
        assert rep.sup_e == pytest.approx(0.09, rel=1e-9)
        assert rep.sigma == pytest.approx(6.3216, abs=1e-3)

    def test_full_set_trivial(self):
        e = IntervalSet.from_pairs([(-0.7, 0.7)])
        rep = remez_check(ATOM_F, 0.7, (-0.7, 0.7), e, 10_001, 301)
        assert rep.passed
        assert rep.log_bound >= rep.log_max_i

    def test_randomized_instances(self):
        rng = np.random.default_rng(2024)
        for _ in range(40):
            f = random_disk_function(rng)
            a = float(rng.uniform(0.5, 0.99))
            lo = float(rng.uniform(-a, 0))
            hi = float(rng.uniform(lo + 0.05 * a, a))
            n = int(rng.integers(1, 11))
            cuts = np.sort(rng.uniform(lo, hi, 2 * n))
            e = IntervalSet.from_pairs(
                [(cuts[2 * k], cuts[2 * k + 1]) for k in range(n)])
            if e.total_length < (hi - lo) / 100:
                continue
            rep = remez_check(f, a, (lo, hi), e, 20_001, 501)
            assert rep.passed

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            remez_check(SINGLE_ZERO, 0.9, (0.0, 0.9), IntervalSet.empty())

    def test_interval_outside_range_rejected(self):
        e = IntervalSet.from_pairs([(0.0, 0.1)])
        with pytest.raises(ValueError):
            remez_check(SINGLE_ZERO, 0.5, (0.0, 0.9), e)

    def test_factor_monotonicity_in_e(self):
        # ratio factor shrinks and sup grows when E is enlarged
        f = SINGLE_ZERO
        a = 0.9
        e_small = IntervalSet.from_pairs([(0.0, 0.05)])
        e_large = IntervalSet.from_pairs([(0.0, 0.05), (0.5, 0.6)])
        sigma = remez_exponent(f, a)
        ratio_small = sigma * math.log(8 * 0.9 / e_small.total_length)
        ratio_large = sigma * math.log(8 * 0.9 / e_large.total_length)
        assert ratio_large < ratio_small
        sup_small = sup_log_abs_on_set(f, e_small, 301)
        sup_large = sup_log_abs_on_set(f, e_large, 301)
        assert sup_large >= sup_small


class TestClassicalRemez:
    def test_power_closed_form(self):
        for n in (1, 3, 7):
            coeffs = np.zeros(n + 1)
            coeffs[n] = 1.0
            e = IntervalSet.from_pairs([(0.0, 0.5)])
            rep = classical_remez_check(coeffs, (0.0, 1.0), e, 20_001, 2001)
            assert rep.passed
            assert rep.lhs == pytest.approx(1.0, rel=1e-9)
            # bound is (4 * 1 / 0.5)^n * (1/2)^n = 4^n
            assert rep.rhs == pytest.approx(4.0 ** n, rel=1e-6)

    def test_full_set(self):
        coeffs = np.array([1.0, -2.0, 0.5])
        e = IntervalSet.from_pairs([(-1.0, 1.0)])
        rep = classical_remez_check(coeffs, (-1.0, 1.0), e)
        assert rep.passed

    def test_constant_degree_zero_equality(self):
        coeffs = np.array([3.0])
        e = IntervalSet.from_pairs([(0.2, 0.3)])
        rep = classical_remez_check(coeffs, (0.0, 1.0), e, 1001, 101)
        assert rep.passed
        assert rep.lhs == pytest.approx(rep.rhs, rel=1e-12)

    def test_randomized(self):
        rng = np.random.default_rng(55)
        for _ in range(25):
            deg = int(rng.integers(0, 21))
            coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
            lo, hi = -1.0, 1.0
            n = int(rng.integers(1, 6))
            cuts = np.sort(rng.uniform(lo, hi, 2 * n))
            e = IntervalSet.from_pairs(
                [(cuts[2 * k], cuts[2 * k + 1]) for k in range(n)])
            if e.total_length < 0.05:
                continue
            assert classical_remez_check(coeffs, (lo, hi), e, 20_001, 501).passed


class TestTextFormat:
    def test_round_trip(self):
        f = make_f(zeros=[0.1 + 0.2j, -0.5], atoms=[(1.0, 0.3)],
                   const=np.exp(0.7j))
        g = parse_disk_function(format_disk_function(f))
        np.testing.assert_allclose(g.zeros, f.zeros, atol=1e-15)
        np.testing.assert_allclose(g.atom_locs, f.atom_locs, atol=1e-15)
        np.testing.assert_allclose(g.atom_weights, f.atom_weights, atol=1e-15)
        assert complex(g.const) == pytest.approx(complex(f.const), abs=1e-15)

    def test_bad_record(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_disk_function("pole 0.5 0.5\n")
