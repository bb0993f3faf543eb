"""laclab: a computational laboratory for fractional-part orbits {n_k x}.

Exact integer-sequence generators and number-theoretic sums, dyadic-grid
orbits with no rounding error, one-dimensional discrepancy, Diophantine
solution counts, an executable grid-filtration coupling construction, and a
reproducible Monte Carlo harness for the classical limit theorems (normal,
Gaussian mixture, Kolmogorov, stable, Frechet).
"""

from .seqgen import (
    IntegerSequence,
    SequenceSpec,
    check_hadamard,
    check_polynomial_gap,
    coefficient_condition_partial_sum,
    delta_fractions,
    delta_sequence,
    divisor_count,
    dyer_harman_sum,
    gcd_sum,
    generate,
    rho_gamma,
)
from .orbit import (
    ConditionReport,
    FixedPointSample,
    PeriodicFunction,
    SingularityError,
    TruncationSchedule,
    evaluate,
    evaluate_array,
    frac_multiple,
    gap_condition_series,
    l2_modulus,
    orbit_floats,
    orbit_matrix,
    partial_sum,
    required_bits,
    sample_point,
    tail_measure,
    truncation_schedule,
)
from .discrepancy import (
    KoksmaReport,
    PointSet,
    discrepancy,
    discrepancy_bruteforce,
    fukuyama_constant,
    koksma_check,
    lil_statistic,
    star_discrepancy,
)
from .diophantine import (
    ConditionProfile,
    DiophantineQuery,
    clt_condition_profile,
    count_solutions,
    count_solutions_bruteforce,
    lil_condition_profile,
)
from .coupling import (
    CouplingPlan,
    CouplingReport,
    DiscreteDistribution,
    GridFiltration,
    build_filtration,
    conditional_expectation_step,
    good_atoms,
    prohorov_distance,
    prohorov_distance_exact,
    simulate_coupling,
    strassen_coupling,
)
from .limits import (
    EmpiricalCDF,
    ErdosFortetCDF,
    ExperimentReport,
    clt_experiment,
    discrepancy_limit_experiment,
    erdos_fortet_cdf,
    erdos_fortet_experiment,
    frechet_cdf,
    frechet_experiment,
    gamma_for_alpha,
    gaussian_covariance,
    kac_variance,
    kolmogorov_cdf,
    ks_distance,
    lil_trace,
    normal_cdf,
    stable_experiment,
    two_sample_ks,
)

__version__ = "0.1.0"
