"""One-dimensional discrepancy: exact formulas, the brute-force oracle, the
bounded-variation integration inequality and the iterated-logarithm statistic.
"""

import numpy as np

from laclab import (
    PeriodicFunction,
    PointSet,
    SequenceSpec,
    discrepancy,
    discrepancy_bruteforce,
    fukuyama_constant,
    generate,
    koksma_check,
    lil_statistic,
    orbit_floats,
    required_bits,
    sample_point,
    star_discrepancy,
)

# sorted-points formula vs O(N^2) sup over candidate intervals
rng = np.random.default_rng(0)
ps = PointSet(rng.random(200))
print("D_N  (formula):   ", discrepancy(ps))
print("D_N  (brute sup): ", discrepancy_bruteforce(ps))
print("D*_N (anchored):  ", star_discrepancy(ps))

# equally spaced midpoints achieve the optimal 1/N
mid = PointSet([(2 * i - 1) / 64 for i in range(1, 33)])
print("\nmidpoint grid D_N = 1/N:", discrepancy(mid))

# the integration-error inequality |mean f - int f| <= 2 V_f D_N
for f in (PeriodicFunction.centered_frac(), PeriodicFunction.erdos_fortet()):
    rep = koksma_check(f, ps)
    print(f"variation {rep.variation:>4}: |mean error| {rep.lhs:.5f} <= 2 V D_N = {rep.rhs:.5f}")

# discrepancy of an actual orbit {2^k x} and its LIL statistic
seq = generate(SequenceSpec.geometric(2, 4096))
x = sample_point(seed=7, replica=0, bits=required_bits(seq.terms[-1]))
orbit = orbit_floats(seq, x, 4096)
ops = PointSet(orbit)
print("\norbit of x under doubling, N=4096:")
print("  D_N =", discrepancy(ops))
print("  N D_N / sqrt(2 N log log N) =", lil_statistic(ops))
print("  limsup constant for doubling:", fukuyama_constant(2))
print("  (and for ratios 3, 4:", fukuyama_constant(3), fukuyama_constant(4), ")")
