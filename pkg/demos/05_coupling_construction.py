"""The executable coupling construction: grid filtrations, exact conditional
means, Prohorov distances, Strassen transports, and the Monte Carlo check of
P(|{n_k x} - Z_k| >= delta_k) <= delta_k against i.i.d. uniforms.
"""

from fractions import Fraction

from laclab import (
    DiscreteDistribution,
    SequenceSpec,
    build_filtration,
    conditional_expectation_step,
    generate,
    good_atoms,
    prohorov_distance,
    prohorov_distance_exact,
    simulate_coupling,
    strassen_coupling,
)

seq = generate(SequenceSpec.explicit([2, 4]))
filt = build_filtration(seq, 1)
print("cut points of the level-1 grid:", filt.atoms_as_fractions())

step = conditional_expectation_step(seq, 1)
print("conditional mean of {2x} on the first atom:", step.value_on_atom(0))
print("its law:", list(zip(step.distribution.support, step.distribution.masses)))
print("sup deviation", step.max_deviation, "<= n_k/n_{k+1} =", step.deviation_bound)

ga = good_atoms(generate(SequenceSpec.geometric(4, 6)), 3)
print("\ngood-cell measure at level 3 of geometric(4):", ga.measure,
      ">=", ga.bound, "->", ga.bound_holds)

# Prohorov distances are computed exactly over the finite candidate set
d0 = DiscreteDistribution.point_mass(0)
d3 = DiscreteDistribution.point_mass(Fraction(3, 10))
u = DiscreteDistribution.uniform_on([0, Fraction(1, 2)])
print("\npi(point 0, point 0.3) =", prohorov_distance_exact(d0, d3))
print("pi(uniform{0,1/2}, point 0) =", prohorov_distance(u, d0))

plan = strassen_coupling(d0, d3, Fraction(3, 10))
print("boundary coupling rows:", plan.rows)
print("marginals exact:", plan.marginal_first() == d0, plan.marginal_second() == d3)

# End to end: couple the orbit of geometric(8) to an i.i.d. uniform sequence
report = simulate_coupling(generate(SequenceSpec.geometric(8, 7)), 6, 20000, seed=5)
print("\nper-level closeness report (delta_k >= 1 bounds are vacuous):")
print(report.to_csv())
