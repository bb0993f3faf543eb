import math

import numpy as np
import pytest

from laclab.discrepancy import (
    PointSet,
    discrepancy,
    discrepancy_bruteforce,
    discrepancy_rows,
    fukuyama_constant,
    koksma_check,
    lil_statistic,
    star_discrepancy,
    star_discrepancy_rows,
)
from laclab.orbit import FixedPointSample, PeriodicFunction


def midgrid(n):
    return PointSet([(2 * i - 1) / (2 * n) for i in range(1, n + 1)])


class TestDiscrepancy:
    def test_single_point_is_one(self):
        assert discrepancy(PointSet([0.37])) == pytest.approx(1.0, abs=1e-12)
        exact = PointSet.from_samples([FixedPointSample(3, 4)])
        assert discrepancy(exact) == 1.0

    def test_midgrid(self):
        assert discrepancy(midgrid(4)) == pytest.approx(0.25, abs=1e-15)

    def test_four_fifths_grid(self):
        assert discrepancy(PointSet([0.2, 0.4, 0.6, 0.8])) == pytest.approx(0.4, abs=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            PointSet([])

    def test_bounds_and_permutation_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(1, 100))
            pts = rng.random(n)
            d = discrepancy(PointSet(pts))
            assert 1.0 / n - 1e-12 <= d <= 1.0 + 1e-12
            assert discrepancy(PointSet(rng.permutation(pts))) == d

    def test_star_vs_extreme_sandwich(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            pts = rng.random(int(rng.integers(1, 80)))
            d = discrepancy(PointSet(pts))
            s = star_discrepancy(PointSet(pts))
            assert s <= d + 1e-12
            assert d <= 2 * s + 1e-12


class TestStarDiscrepancy:
    def test_examples(self):
        assert star_discrepancy(midgrid(4)) == pytest.approx(0.125, abs=1e-15)
        assert star_discrepancy(PointSet([0.5])) == 0.5
        assert star_discrepancy(PointSet([0.0])) == 1.0


class TestBruteForce:
    def test_examples(self):
        assert discrepancy_bruteforce(PointSet([0.5])) == pytest.approx(1.0, abs=1e-12)
        assert discrepancy_bruteforce(midgrid(8)) == pytest.approx(1 / 8, abs=1e-12)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            discrepancy_bruteforce(PointSet(np.random.default_rng(0).random(50)), max_points=10)

    def test_matches_formula(self):
        rng = np.random.default_rng(2)
        for _ in range(150):
            n = int(rng.integers(1, 64))
            ps = PointSet(rng.random(n))
            assert abs(discrepancy(ps) - discrepancy_bruteforce(ps)) <= 1e-12

    def test_row_helpers_match(self):
        rng = np.random.default_rng(3)
        pts = rng.random((40, 33))
        d = discrepancy_rows(pts)
        s = star_discrepancy_rows(pts)
        for r in range(40):
            assert d[r] == pytest.approx(discrepancy(PointSet(pts[r])), abs=1e-13)
            assert s[r] == pytest.approx(star_discrepancy(PointSet(pts[r])), abs=1e-13)


class TestKoksma:
    CATALOG = [
        PeriodicFunction.cosine(),
        PeriodicFunction.centered_frac(),
        PeriodicFunction.sign_sine(),
        PeriodicFunction.erdos_fortet(),
        PeriodicFunction.centered_indicator(0.3),
    ]

    def test_example_single_point(self):
        rep = koksma_check(PeriodicFunction.centered_frac(), PointSet([0.5]))
        assert rep.lhs == 0.0
        assert rep.holds
        assert rep.rhs == pytest.approx(2 * 2.0 * 1.0)

    def test_equally_spaced_lhs_near_zero(self):
        ps = midgrid(512)
        rep = koksma_check(PeriodicFunction.cosine(), ps)
        assert rep.lhs < 1e-10
        assert rep.holds

    def test_never_violated_on_random_instances(self):
        rng = np.random.default_rng(4)
        for i in range(300):
            f = self.CATALOG[i % len(self.CATALOG)]
            ps = PointSet(rng.random(int(rng.integers(1, 200))))
            assert koksma_check(f, ps).holds

    def test_unbounded_variation_rejected(self):
        with pytest.raises(ValueError):
            koksma_check(PeriodicFunction.heavy_tail(1.0), PointSet([0.25]))


class TestIntervalFamilyEstimate:
    def test_indicator_family_bounds(self):
        # (1/4) sup_t |sum I_t(x_k)| <= N D_N, and N D_N <= 2 (sup + slack):
        # the anchored grid family surrogates the V <= 2 class
        rng = np.random.default_rng(5)
        grid = np.linspace(0, 1, 1024, endpoint=False)
        for _ in range(25):
            n = int(rng.integers(8, 200))
            pts = np.sort(rng.random(n))
            counts = np.searchsorted(pts, grid, side="right")
            sup = np.abs(counts - n * grid).max()
            nd = n * discrepancy(PointSet(pts))
            assert 0.25 * sup <= nd + 1e-9
            assert nd <= 2.0 * (sup + n / 1024 + 1.0) + 1e-9


class TestLilStatistic:
    def test_equally_spaced_value(self):
        got = lil_statistic(midgrid(16))
        expected = 16 * (1 / 16) / math.sqrt(2 * 16 * math.log(math.log(16)))
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(0.17505, abs=1e-4)

    def test_linear_in_discrepancy(self):
        ps1 = midgrid(64)
        ps2 = PointSet(np.concatenate([np.zeros(32) + 1e-9, np.linspace(0.5, 0.999, 32)]))
        r = discrepancy(ps2) / discrepancy(ps1)
        assert lil_statistic(ps2) / lil_statistic(ps1) == pytest.approx(r, rel=1e-12)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            lil_statistic(midgrid(8))


class TestFukuyamaConstant:
    def test_values(self):
        assert fukuyama_constant(2) == pytest.approx(math.sqrt(42) / 9, abs=1e-15)
        assert fukuyama_constant(3) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert fukuyama_constant(4) == pytest.approx(
            math.sqrt(5 * 4 * 2) / (2 * math.sqrt(27)), abs=1e-15
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            fukuyama_constant(1)
