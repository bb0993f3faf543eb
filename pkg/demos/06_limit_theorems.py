"""Desk-scale Monte Carlo reproduction of the limit theorems: normal sums,
the Gaussian-mixture law of the shifted doubling orbit, the Kolmogorov law
for the discrepancy, stable sums and Frechet maxima of a heavy-tailed
function, and an exploratory iterated-logarithm trace.

Runs in about a minute at these reduced sizes; the acceptance suite runs the
full-scale versions.
"""

from laclab import (
    PeriodicFunction,
    clt_experiment,
    discrepancy_limit_experiment,
    erdos_fortet_experiment,
    frechet_experiment,
    gamma_for_alpha,
    gaussian_covariance,
    kac_variance,
    lil_trace,
    stable_experiment,
)

SEED = 7

rep = clt_experiment(theta=2, n_terms=1024, replicas=5000, seed=SEED)
print("normal limit for cos along 2^k:   KS =", round(rep.results["ks_vs_normal"], 4))

rep = erdos_fortet_experiment(n_terms=1024, replicas=5000, seed=SEED)
print("mixture law along 2^k - 1:        KS =", round(rep.results["ks_vs_mixture"], 4),
      " (vs pure normal:", round(rep.results["ks_vs_normal"], 4), "- visibly off)")

rep = discrepancy_limit_experiment(base=2, n_terms=256, replicas=4000, seed=SEED)
print("Kolmogorov law for sqrt(N) D*_N:  KS =", round(rep.results["ks_vs_kolmogorov"], 4))

alpha = 1.5
print(f"\nheavy tails with alpha = {alpha}: gap exponent gamma =", gamma_for_alpha(alpha))
rep = stable_experiment(alpha=alpha, n_terms=256, replicas=4000, seed=SEED)
print("stable sums, orbit vs iid:        KS =", round(rep.results["ks_two_sample"], 4),
      " (iid-vs-iid floor:", round(rep.results["ks_calibration"], 4), ")")

rep = frechet_experiment(alpha=1.0, n_terms=256, replicas=4000, seed=SEED)
print("Frechet maxima:                   KS =", round(rep.results["ks_vs_frechet"], 4))

print("\ndoubling-map variance of cos:", kac_variance(PeriodicFunction.cosine()))
print("empirical-process covariance Gamma(1/2, 1/2; base 2):", gaussian_covariance(2, 0.5, 0.5))

print("\nexploratory LIL trace along 2^k (no asymptotics at desk scale):")
print(lil_trace(theta=2, max_n=1 << 14, seed=SEED).to_csv())
