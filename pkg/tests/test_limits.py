import math

import numpy as np
import pytest
import scipy.special
import scipy.stats

from laclab.limits import (
    EmpiricalCDF,
    ErdosFortetCDF,
    clt_experiment,
    cross_correlation_integral,
    discrepancy_limit_experiment,
    dkw_slack,
    erdos_fortet_cdf,
    erdos_fortet_experiment,
    frechet_cdf,
    frechet_experiment,
    gamma_for_alpha,
    gaussian_covariance,
    heavy_tail_inverse_cdf,
    kac_variance,
    kolmogorov_cdf,
    kolmogorov_cdf_array,
    ks_distance,
    lil_trace,
    normal_cdf,
    normal_cdf_array,
    square_norm,
    stable_experiment,
    two_sample_ks,
)
from laclab.orbit import PeriodicFunction, evaluate_array
from laclab.rng import STREAM_POINT, replica_generator, uniform_open


class TestKolmogorovCDF:
    def test_endpoints(self):
        assert kolmogorov_cdf(0.0) == 0.0
        assert kolmogorov_cdf(-1.0) == 0.0
        assert kolmogorov_cdf(3.0) == pytest.approx(1.0 - 2 * math.exp(-18.0), abs=1e-12)

    def test_median(self):
        assert kolmogorov_cdf(0.82757) == pytest.approx(0.5, abs=1e-4)

    def test_monotone_with_limits(self):
        grid = np.linspace(0.0, 4.0, 1000)
        vals = kolmogorov_cdf_array(grid)
        assert np.all(np.diff(vals) >= -1e-15)
        assert vals[0] == 0.0 and vals[-1] > 1 - 1e-10

    def test_against_scipy(self):
        for t in np.linspace(0.01, 3.0, 300):
            assert kolmogorov_cdf(float(t)) == pytest.approx(
                1.0 - scipy.special.kolmogorov(t), abs=1e-12
            )


class TestNormalCDF:
    def test_reference_points(self):
        assert normal_cdf(0.0) == 0.5
        assert normal_cdf(1.96) == pytest.approx(0.975, abs=1e-3)
        assert normal_cdf(40.0) == 1.0
        assert normal_cdf(-40.0) == 0.0

    def test_quadrature_oracle(self):
        # integrate the density by fine midpoint rule
        for t in (-1.3, -0.2, 0.7, 2.1):
            u = np.linspace(-12.0, t, 1 << 18)
            mid = (u[:-1] + u[1:]) / 2
            quad = float(np.sum(np.exp(-mid * mid / 2)) * (u[1] - u[0]) / math.sqrt(2 * math.pi))
            assert normal_cdf(t) == pytest.approx(quad, abs=1e-9)

    def test_matches_vector_path(self):
        grid = np.linspace(-5, 5, 101)
        scal = np.array([normal_cdf(float(t)) for t in grid])
        assert np.allclose(scal, normal_cdf_array(grid), atol=1e-12)


class TestKacVariance:
    def test_cosine(self):
        assert kac_variance(PeriodicFunction.cosine()) == pytest.approx(0.5, abs=1e-8)

    def test_double_harmonic(self):
        # base 1; the single surviving cross term contributes 2 * 1/2
        assert kac_variance(PeriodicFunction.erdos_fortet()) == pytest.approx(2.0, abs=1e-6)

    def test_zero_function(self):
        z = PeriodicFunction.harmonic([(0.0, 0.0)])
        assert kac_variance(z) == 0.0

    def test_centered_frac_closed_form(self):
        # 1/12 + 2 sum_k 1/(12 2^k) = 1/4
        assert kac_variance(PeriodicFunction.centered_frac(), kmax=40) == pytest.approx(
            0.25, abs=1e-10
        )

    def test_sign_sine_orthogonal_to_even_multiples(self):
        assert kac_variance(PeriodicFunction.sign_sine(), kmax=30) == pytest.approx(1.0, abs=1e-12)

    def test_cross_correlation_against_quadrature(self):
        # midpoint quadrature on jump discontinuities carries O(1/Q) error
        q = 1 << 18
        u = (np.arange(q) + 0.5) / q
        for f in (PeriodicFunction.centered_frac(), PeriodicFunction.sign_sine()):
            for n in (1, 2, 3, 5, 8):
                quad = float(np.mean(evaluate_array(f, u) * evaluate_array(f, np.mod(n * u, 1.0))))
                assert cross_correlation_integral(f, n) == pytest.approx(quad, abs=8 * n / q)

    def test_square_norms(self):
        assert square_norm(PeriodicFunction.cosine()) == 0.5
        assert square_norm(PeriodicFunction.centered_frac()) == pytest.approx(1 / 12)
        assert square_norm(PeriodicFunction.centered_indicator(0.3)) == pytest.approx(0.21)


class TestErdosFortetCDF:
    def test_center_and_tails(self):
        assert erdos_fortet_cdf(0.0) == pytest.approx(0.5, abs=1e-12)
        assert erdos_fortet_cdf(12.0) == pytest.approx(1.0, abs=1e-8)
        assert erdos_fortet_cdf(-12.0) == pytest.approx(0.0, abs=1e-8)

    def test_symmetry(self):
        cdf = ErdosFortetCDF()
        for x in (0.1, 0.7, 1.5, 2.4):
            assert float(cdf(x) + cdf(-x)) == pytest.approx(1.0, abs=1e-8)

    def test_monotone(self):
        cdf = ErdosFortetCDF()
        vals = cdf(np.linspace(-4, 4, 400))
        assert np.all(np.diff(vals) >= -1e-12)

    def test_variance_is_one(self):
        cdf = ErdosFortetCDF()
        assert cdf.variance() == pytest.approx(1.0, abs=1e-12)
        # independent check: Stieltjes sum against the evaluated CDF
        grid = np.linspace(-14.0, 14.0, 200001)
        mids = (grid[:-1] + grid[1:]) / 2
        masses = np.diff(cdf(grid))
        assert float(np.sum(mids**2 * masses)) == pytest.approx(1.0, abs=1e-6)


class TestGaussianCovariance:
    def test_vanishing_at_unit_argument(self):
        assert gaussian_covariance(2, 1.0, 1.0) == 0.0

    def test_half_half(self):
        assert gaussian_covariance(2, 0.5, 0.5) == 0.25

    def test_symmetry_exact(self):
        for s, t in ((0.3, 0.7), (0.1, 0.9), (0.25, 0.4)):
            assert gaussian_covariance(2, s, t) == gaussian_covariance(2, t, s)

    def test_zero_truncation_is_bridge_covariance(self):
        for s, t in ((0.2, 0.6), (0.5, 0.5)):
            assert gaussian_covariance(3, s, t, kmax=0) == pytest.approx(min(s, t) - s * t)

    def test_positive_semidefinite_on_random_grids(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            grid = np.sort(rng.random(5))
            mat = np.array([[gaussian_covariance(2, float(s), float(t)) for t in grid] for s in grid])
            eig = np.linalg.eigvalsh(mat)
            assert eig.min() >= -1e-9


class TestKSDistances:
    def test_identical_samples(self):
        assert two_sample_ks([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_disjoint_points(self):
        assert two_sample_ks([0.0], [1.0]) == 1.0

    def test_uniform_sample_against_identity(self):
        gen = replica_generator(99, 0, STREAM_POINT)
        u = uniform_open(gen, 10000)
        ks = ks_distance(EmpiricalCDF(u), lambda t: np.clip(t, 0.0, 1.0))
        assert ks < 0.03

    def test_exactness_on_tiny_case(self):
        # F_hat jumps at 0.5; identity reference: sup is at the jump
        ks = ks_distance(EmpiricalCDF([0.5]), lambda t: np.clip(t, 0, 1))
        assert ks == 0.5


class TestVarianceNormalization:
    def test_cosine_sum_variance_is_half_n(self):
        # distinct integer frequencies are orthogonal: Var(S_N) = N/2 exactly
        terms = [3, 7, 19, 41, 90, 221]
        q = 1 << 12
        u = (np.arange(q) + 0.5) / q
        s = np.zeros(q)
        for n in terms:
            s += np.cos(2 * np.pi * np.mod(n * u, 1.0))
        assert float(np.mean(s * s)) == pytest.approx(len(terms) / 2, abs=1e-10)

    def test_monte_carlo_variance_close(self):
        rep = clt_experiment(theta=2, n_terms=128, replicas=10000, seed=5)
        assert rep.results["sample_var"] == pytest.approx(1.0, rel=0.05)


class TestExperimentsSmoke:
    def test_clt_small(self):
        rep = clt_experiment(theta=2, n_terms=256, replicas=2000, seed=11)
        assert rep.passed
        assert rep.results["ks_vs_normal"] < 0.05

    def test_clt_kac_normalization(self):
        rep = clt_experiment(theta=2, n_terms=256, replicas=2000, seed=11, normalization="kac")
        assert rep.passed

    def test_clt_negative_control_single_term(self):
        rep = clt_experiment(theta=2, n_terms=1, replicas=2000, seed=11)
        assert rep.results["ks_vs_normal"] > 0.05  # arcsine-type law, far from normal

    def test_ef_small(self):
        rep = erdos_fortet_experiment(n_terms=512, replicas=2000, seed=11)
        assert rep.results["ks_vs_mixture"] < 0.05

    def test_kdist_small_both_controls(self):
        for control in ("sequence", "iid"):
            rep = discrepancy_limit_experiment(
                base=2, n_terms=64, replicas=2000, seed=11, control=control
            )
            assert rep.results["ks_vs_kolmogorov"] < 0.07

    def test_stable_small(self):
        rep = stable_experiment(alpha=1.5, n_terms=128, replicas=2000, seed=11)
        assert rep.results["ks_two_sample"] < 0.08
        assert rep.results["ks_calibration"] < 0.08

    def test_frechet_small(self):
        rep = frechet_experiment(alpha=1.0, n_terms=128, replicas=1000, seed=11)
        assert rep.results["ks_vs_frechet"] < 0.08

    def test_alpha_domain(self):
        with pytest.raises(ValueError):
            stable_experiment(alpha=2.5, n_terms=16, replicas=10, seed=0)
        with pytest.raises(ValueError):
            gamma_for_alpha(0.0)

    def test_inverse_cdf_matches_tail(self):
        # P(xi > t) = t^-alpha for t >= 2^(1/alpha), exactly by construction
        alpha = 1.5
        u = np.linspace(0.501, 0.999, 400)
        xs = heavy_tail_inverse_cdf(alpha, u)
        assert np.allclose(1.0 - u, xs ** (-alpha), atol=1e-12)
        with pytest.raises(ValueError):
            heavy_tail_inverse_cdf(alpha, np.array([0.0]))

    def test_frechet_reference_value(self):
        assert frechet_cdf(1.0, 1.0) == pytest.approx(math.exp(-1.0), abs=1e-15)
        assert frechet_cdf(-0.5, 1.0) == 0.0


class TestDeterminism:
    def test_same_config_same_bytes(self):
        a = clt_experiment(theta=2, n_terms=64, replicas=1500, seed=3).to_json()
        b = clt_experiment(theta=2, n_terms=64, replicas=1500, seed=3).to_json()
        assert a == b

    def test_thread_count_invisible(self):
        one = stable_experiment(alpha=1.5, n_terms=64, replicas=1200, seed=3, threads=1).to_json()
        four = stable_experiment(alpha=1.5, n_terms=64, replicas=1200, seed=3, threads=4).to_json()
        assert one == four

    def test_different_seeds_differ(self):
        a = clt_experiment(theta=2, n_terms=64, replicas=500, seed=1)
        b = clt_experiment(theta=2, n_terms=64, replicas=500, seed=2)
        assert a.results["ks_vs_normal"] != b.results["ks_vs_normal"]


class TestLilTrace:
    def test_table_well_formed(self):
        trace = lil_trace(theta=2, max_n=4096, seed=0)
        assert trace.checkpoints == tuple(1 << j for j in range(4, 13))
        assert all(math.isfinite(v) for v in trace.sum_statistic)
        assert all(math.isfinite(v) for v in trace.discrepancy_statistic)
        assert trace.to_csv().splitlines()[0] == "N,sum_statistic,discrepancy_statistic"

    def test_sanity_band_regression(self):
        trace = lil_trace(theta=2, max_n=1 << 14, seed=0)
        assert all(-3.0 <= v <= 3.0 for v in trace.sum_statistic)
        assert all(0.0 <= v <= 3.0 for v in trace.discrepancy_statistic)

    def test_two_seeds_differ(self):
        a = lil_trace(theta=2, max_n=1024, seed=0)
        b = lil_trace(theta=2, max_n=1024, seed=1)
        assert a.sum_statistic != b.sum_statistic


class TestSlack:
    def test_dkw_value(self):
        assert dkw_slack(20000) == pytest.approx(2 * math.sqrt(math.log(200.0) / 40000.0))
        assert dkw_slack(100) > dkw_slack(10000)
