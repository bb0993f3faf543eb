"""Sequence generators, gap conditions and number-theoretic sums.

Generates the catalog of integer sequences, checks their growth conditions
with exact rational comparisons, and evaluates the gcd-ratio and
gcd-over-geometric-mean sums that control L2 norms of Sum f(n_k x).
"""

from fractions import Fraction

from laclab import (
    SequenceSpec,
    check_hadamard,
    check_polynomial_gap,
    coefficient_condition_partial_sum,
    delta_sequence,
    divisor_count,
    dyer_harman_sum,
    gcd_sum,
    generate,
    rho_gamma,
)

# Four generator kinds
geo = generate(SequenceSpec.geometric(2, 10))
shifted = generate(SequenceSpec.geometric_minus_one(2, 10))
poly = generate(SequenceSpec.power_gap(1.0, 1, 10))
superlac = generate(SequenceSpec.superlacunary_square(2, 6))

print("geometric(2):            ", geo.terms)
print("geometric(2) minus one:  ", shifted.terms)
print("power_gap(gamma=1, n1=1):", poly.terms)
print("superlacunary squares:   ", superlac.terms)

# Gap conditions are exact big-integer comparisons, never float ratios
print("\ngeometric(2) has ratio >= 2:       ", check_hadamard(geo, 2.0))
print("geometric(2) has ratio >= 2 + 1e-15:", check_hadamard(geo, 2.0 + 1e-15))
print("power_gap passes k^1 gaps:          ", check_polynomial_gap(poly, 1.0))
print("geometric(2) fails k^1 gaps:        ", check_polynomial_gap(geo, 1.0))

# Closeness bounds delta_k = 5(n_{k-1}/n_k + n_k/n_{k+1})
print("\ndelta_k for the superlacunary squares:")
print([f"{d:.3g}" for d in delta_sequence(superlac)])

# The gcd sum is an exact rational; the scaling-invariant variant is a float
small = generate(SequenceSpec.explicit([2, 3, 4]))
print("\ngcd sum of (2,3,4):", gcd_sum(small), "=", float(gcd_sum(small)))
print("gcd/sqrt sum of (1,2):", dyer_harman_sum(generate(SequenceSpec.explicit([1, 2]))))
assert gcd_sum(small) == Fraction(15, 4)

# Divisor-weighted coefficient conditions for a.e. convergence of sum c_k f(kx)
c = [1.0 / k for k in range(1, 64)]
print("\nd(12) =", divisor_count(12), " rho_0.75(12) =", round(rho_gamma(12, 0.75), 5))
for kind, kw in (("rademacher_mensov_eps", {"eps": 0.5}), ("weber_divisor", {}), ("weber_rho", {"gamma": 0.75})):
    print(f"partial sum, {kind}: {coefficient_condition_partial_sum(c, kind, **kw):.5f}")
