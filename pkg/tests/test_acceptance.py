"""Acceptance suite: every criterion at its stated scale and tolerance.

Each test prints one PASS line with the measured quantities (run pytest with
-s to see them inline). Tolerances are the stated ones, not the slack-padded
experiment thresholds; runtime caps are asserted where stated.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from laclab.coupling import (
    DiscreteDistribution,
    conditional_expectation_step,
    good_atoms,
    prohorov_distance_exact,
    simulate_coupling,
    strassen_coupling,
    wilson_upper_slack,
)
from laclab.diophantine import DiophantineQuery, count_solutions, count_solutions_bruteforce
from laclab.discrepancy import (
    PointSet,
    discrepancy,
    discrepancy_bruteforce,
    fukuyama_constant,
    koksma_check,
)
from laclab.limits import (
    ErdosFortetCDF,
    clt_experiment,
    discrepancy_limit_experiment,
    erdos_fortet_experiment,
    frechet_experiment,
    gaussian_covariance,
    kac_variance,
    stable_experiment,
)
from laclab.orbit import PeriodicFunction, l2_modulus
from laclab.seqgen import SequenceSpec, gcd_sum, generate
from laclab import cli

SEED = 20260808

pytestmark = pytest.mark.acceptance


def report(n, detail):
    print(f"\nACCEPTANCE {n:2d} PASS: {detail}")


@pytest.mark.parametrize("criterion", [1])
def test_criterion_01_discrepancy_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 201))
        ps = PointSet(rng.random(n))
        gap = abs(discrepancy(ps) - discrepancy_bruteforce(ps))
        worst = max(worst, gap)
        assert gap <= 1e-12
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report(1, f"formula vs brute force on 1000 sets, max gap {worst:.2e}, {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [2])
def test_criterion_02_koksma_inequality_never_violated(criterion):
    rng = np.random.default_rng(SEED + 1)
    catalog = [
        PeriodicFunction.cosine(),
        PeriodicFunction.harmonic([(0.5, -0.25), (0.0, 1.0)]),
        PeriodicFunction.centered_frac(),
        PeriodicFunction.sign_sine(),
        PeriodicFunction.erdos_fortet(),
    ]
    violations = 0
    for i in range(1000):
        f = catalog[i % len(catalog)] if i % 7 else PeriodicFunction.centered_indicator(
            float(rng.random())
        )
        ps = PointSet(rng.random(int(rng.integers(1, 400))))
        if not koksma_check(f, ps).holds:
            violations += 1
    assert violations == 0
    report(2, "bounded-variation inequality held on 1000 random (f, point set) instances")


def _gcd_lcm_oracle(terms):
    """Enumeration gcd/lcm: largest common divisor by divisor grid, least
    common multiple by scanning multiples."""
    t = np.asarray(terms, dtype=np.int64)
    n = t.size
    ii, jj = np.triu_indices(n, k=1)
    a, b = t[ii], t[jj]
    dgrid = np.arange(1, int(t.max()) + 1, dtype=np.int64)
    mask = ((a[:, None] % dgrid[None, :]) == 0) & ((b[:, None] % dgrid[None, :]) == 0)
    g = (mask * dgrid[None, :]).max(axis=1)
    kgrid = np.arange(1, int(t.max()) + 1, dtype=np.int64)
    mult = b[:, None] * kgrid[None, :]
    ok = (mult % a[:, None]) == 0
    first = np.argmax(ok, axis=1)
    l = b * kgrid[first]
    return list(zip(g.tolist(), l.tolist()))


@pytest.mark.parametrize("criterion", [3])
def test_criterion_03_gcd_and_diophantine_oracles(criterion):
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    for trial in range(100):
        n = rng.randint(2, 64)
        terms = sorted(rng.sample(range(1, 1024), n))
        seq = generate(SequenceSpec.explicit(terms))
        expected = Fraction(len(terms))
        for g, l in _gcd_lcm_oracle(terms):
            expected += Fraction(g, l)
        assert gcd_sum(seq) == expected
        d = rng.randint(1, 4)
        nu = rng.randint(-32, 32)
        q = DiophantineQuery(seq, n, d, nu)
        assert count_solutions(q) == count_solutions_bruteforce(q)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report(3, f"gcd sums and solution counts equal enumeration on 100 sequences, {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [4])
def test_criterion_04_coupling_bound_and_exact_inequalities(criterion):
    t0 = time.perf_counter()
    seq = generate(SequenceSpec.geometric(8, 7))
    rep = simulate_coupling(seq, 6, 100000, seed=SEED)
    for row in rep.rows:
        bound = row.delta_k + wilson_upper_slack(min(row.delta_k, 1.0), row.samples)
        assert row.exceedance <= bound
    for k in range(1, 7):
        step = conditional_expectation_step(seq, k)
        assert step.bound_holds  # sup |{n_k x} - E(.|atoms)| <= n_k/n_{k+1}, exact
        ga = good_atoms(seq, k)
        assert ga.side_condition_holds
        assert ga.bound_holds  # measure >= 1 - 2 eps_k, exact rationals
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    exceed = max(r.exceedance for r in rep.rows)
    report(4, f"closeness bound with M=1e5 (max exceedance {exceed}), exact atom bounds k=1..6, {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [5])
def test_criterion_05_clt(criterion):
    t0 = time.perf_counter()
    rep = clt_experiment(theta=2, n_terms=4096, replicas=20000, seed=SEED)
    ks = rep.results["ks_vs_normal"]
    assert ks <= 0.05
    neg = clt_experiment(theta=2, n_terms=1, replicas=20000, seed=SEED)
    ks_neg = neg.results["ks_vs_normal"]
    assert ks_neg > 0.1
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    report(5, f"KS vs normal {ks:.4f} <= 0.05; N=1 control {ks_neg:.4f} > 0.1; {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [6])
def test_criterion_06_erdos_fortet_mixture(criterion):
    t0 = time.perf_counter()
    rep = erdos_fortet_experiment(n_terms=4096, replicas=20000, seed=SEED)
    ks_mix = rep.results["ks_vs_mixture"]
    ks_norm = rep.results["ks_vs_normal"]
    assert ks_mix <= 0.05
    assert ks_norm > 0.05
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    report(6, f"KS vs mixture {ks_mix:.4f} <= 0.05, vs normal {ks_norm:.4f} > 0.05; {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [7])
def test_criterion_07_kolmogorov_law_for_discrepancy(criterion):
    t0 = time.perf_counter()
    seq_rep = discrepancy_limit_experiment(
        base=2, n_terms=256, replicas=10000, seed=SEED, control="sequence"
    )
    iid_rep = discrepancy_limit_experiment(
        base=2, n_terms=256, replicas=10000, seed=SEED, control="iid"
    )
    ks_seq = seq_rep.results["ks_vs_kolmogorov"]
    ks_iid = iid_rep.results["ks_vs_kolmogorov"]
    assert ks_seq <= 0.05
    assert ks_iid <= 0.05
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    report(7, f"KS vs Kolmogorov law: orbit {ks_seq:.4f}, iid control {ks_iid:.4f}; {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [8])
def test_criterion_08_stable_limit(criterion):
    t0 = time.perf_counter()
    rep = stable_experiment(alpha=1.5, n_terms=1024, replicas=10000, seed=SEED)
    ks = rep.results["ks_two_sample"]
    calib = rep.results["ks_calibration"]
    assert ks <= 0.05
    assert calib <= 0.03
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    report(8, f"two-sample KS {ks:.4f} <= 0.05, calibration {calib:.4f} <= 0.03; {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [9])
def test_criterion_09_frechet_limit(criterion):
    t0 = time.perf_counter()
    rep = frechet_experiment(alpha=1.0, n_terms=1024, replicas=10000, seed=SEED)
    ks = rep.results["ks_vs_frechet"]
    assert ks <= 0.05
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    report(9, f"KS vs exp(-1/x) {ks:.4f} <= 0.05; {elapsed:.1f}s")


@pytest.mark.parametrize("criterion", [10])
def test_criterion_10_reference_values(criterion):
    assert kac_variance(PeriodicFunction.cosine()) == pytest.approx(0.5, abs=1e-8)
    assert kac_variance(PeriodicFunction.erdos_fortet()) == pytest.approx(2.0, abs=1e-6)
    assert fukuyama_constant(2) == pytest.approx(math.sqrt(42.0) / 9.0, abs=1e-12)
    assert gaussian_covariance(2, 0.5, 0.5) == pytest.approx(0.25, abs=1e-9)
    assert l2_modulus(PeriodicFunction.cosine(), 0.125) == pytest.approx(1.0, abs=1e-9)
    assert ErdosFortetCDF().variance() == pytest.approx(1.0, abs=1e-6)
    report(10, "six reference values at stated tolerances")


@pytest.mark.parametrize("criterion", [11])
def test_criterion_11_prohorov_and_strassen_properties(criterion):
    rng = random.Random(SEED)

    def rand_dist():
        n = rng.randint(1, 10)
        denom = rng.choice([24, 60, 100])
        pts = rng.sample(range(denom + 1), n)
        weights = [rng.randint(1, 9) for _ in range(n)]
        total = sum(weights)
        return DiscreteDistribution.from_pairs(
            (Fraction(p, denom), Fraction(w, total)) for p, w in zip(pts, weights)
        )

    violations = 0
    for _ in range(100):
        p1, p2, p3 = rand_dist(), rand_dist(), rand_dist()
        d12 = prohorov_distance_exact(p1, p2)
        if d12 != prohorov_distance_exact(p2, p1):
            violations += 1
        if d12 > prohorov_distance_exact(p1, p3) + prohorov_distance_exact(p3, p2):
            violations += 1
        if prohorov_distance_exact(p1, p1) != 0:
            violations += 1
        plan = strassen_coupling(p1, p2, d12)
        if plan.marginal_first() != p1 or plan.marginal_second() != p2:
            violations += 1
        if plan.exceedance_mass(d12 * (1 + Fraction(1, 10**12))) > d12 + Fraction(1, 10**9):
            violations += 1
    assert violations == 0
    report(11, "metric axioms and coupling marginals exact on 100 random pairs, zero violations")


@pytest.mark.parametrize("criterion", [12])
def test_criterion_12_determinism_across_threads(criterion, tmp_path, capsys):
    outputs = {}
    for name, argv in {
        "clt": ["clt", "--N", "256", "--M", "2000", "--seed", str(SEED)],
        "stable": ["stable", "--alpha", "1.5", "--N", "64", "--M", "500", "--seed", str(SEED)],
    }.items():
        blobs = []
        for threads in ("1", "2", "8"):
            out = tmp_path / f"{name}-{threads}.json"
            code = cli.run(argv + ["--threads", threads, "--out", str(out)])
            capsys.readouterr()
            assert code == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]
        outputs[name] = blobs[0]
    assert outputs["clt"] != outputs["stable"]
    report(12, "byte-identical experiment output across 1, 2, 8 threads (clt and stable)")
