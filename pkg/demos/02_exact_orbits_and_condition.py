"""Exact dyadic-grid orbits {n_k x} and the summability condition evaluator.

The sample x is a B-bit binary fraction with B >= log2(n_N) + 64 guard bits,
so every {n_k x} below is an exact grid value: the superlacunary terms exceed
2^500 and a float orbit would be pure noise.
"""

import numpy as np

from laclab import (
    PeriodicFunction,
    SequenceSpec,
    frac_multiple,
    gap_condition_series,
    generate,
    orbit_floats,
    partial_sum,
    required_bits,
    sample_point,
)

seq = generate(SequenceSpec.superlacunary_square(2, 10))
bits = required_bits(seq.terms[-1])
print(f"largest term has {seq.terms[-1].bit_length()} bits; grid uses B = {bits} bits")

x = sample_point(seed=1, replica=0, bits=bits)
orbit = orbit_floats(seq, x, 10)
print("orbit {n_k x}:", np.round(orbit, 6))

# the fast kernels agree with the direct modular product, bit for bit
direct = [frac_multiple(x, n, require_guard=True).to_float() for n in seq.terms]
assert list(orbit) == direct

f = PeriodicFunction.erdos_fortet()
print("S_10 =", partial_sum(f, seq, x, 10))

# The truncation/modulus series that governs the almost-i.i.d. approximation:
# superlacunary gaps make it summable for a smooth function...
rep = gap_condition_series(PeriodicFunction.cosine(), seq, 8)
print("\ncosine along superlacunary squares:", rep.verdict)
print(" terms:", [f"{t:.3g}" for t in rep.terms])

# ...while constant-ratio growth with a heavy-tailed function is hopeless
geo = generate(SequenceSpec.geometric(2, 12))
rep2 = gap_condition_series(PeriodicFunction.heavy_tail(1.0), geo, 10)
print("heavy tail along geometric(2):", rep2.verdict)
print(" terms:", [f"{t:.3g}" for t in rep2.terms])

# a fast polynomial gap rescues the heavy tail
poly = generate(SequenceSpec.power_gap(17.0, 1, 12))
rep3 = gap_condition_series(PeriodicFunction.heavy_tail(1.0), poly, 10)
print("heavy tail along power_gap(17):", rep3.verdict)
print(rep3.to_csv())
