"""Counting solutions of a n_k - b n_l = nu and the finite-window profiles of
the conditions that decide normal / iterated-logarithm behavior.
"""

from laclab import (
    DiophantineQuery,
    SequenceSpec,
    clt_condition_profile,
    count_solutions,
    generate,
    lil_condition_profile,
)

pow2 = generate(SequenceSpec.explicit([1, 2, 4, 8]))
print("powers of two, d=2, nu=0:", count_solutions(DiophantineQuery(pow2, 4, 2, 0)),
      "(the 2 n_k = n_{k+1} resonance, both orientations)")
print("powers of two, d=1, nu=1:", count_solutions(DiophantineQuery(pow2, 4, 1, 1)))

# geometric(2) fails the normality condition at nu = 0 ...
geo = generate(SequenceSpec.geometric(2, 32))
prof = clt_condition_profile(geo, 32, 2, offsets=[0])
print("\ngeometric(2), nu = 0 included:")
print(prof.to_csv())
print("verdict:", prof.verdict)

# ... the shifted powers 2^k - 1 carry a resonance at nu = -1 ...
shifted = generate(SequenceSpec.geometric_minus_one(2, 32))
prof2 = clt_condition_profile(shifted, 32, 2, offsets=[-1])
print("2^k - 1, nu = -1:", [r.count for r in prof2.rows], "->", prof2.verdict)

# ... while superlacunary growth empties every window
superlac = generate(SequenceSpec.superlacunary_square(2, 8))
prof3 = clt_condition_profile(superlac, 8, 4)
print("superlacunary squares:", [r.count for r in prof3.rows], "->", prof3.verdict)

prof4 = lil_condition_profile(shifted, 32, 2, offsets=[-1], eps=0.1)
print("\nLIL weighting on the resonant case:", prof4.verdict)
print(prof4.to_csv())
