"""Reference limit distributions and the Monte Carlo harness that reproduces
the distributional limit theorems for sums, maxima and discrepancies of
f({n_k x}) at desk scale.

Every experiment is replica-parallel with counter-based streams: replica r of
a run draws from the Philox stream (seed, r), so reports are byte-identical
for a fixed configuration regardless of thread count or batching. Assertion
thresholds carry a distribution-free (DKW-style) sampling slack on top of the
stated tolerance.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from hashlib import sha256
from typing import Callable, Iterable

import numpy as np
from scipy.special import ndtr  # vectorized standard normal CDF

from .exact import kahan_sum, mpz
from .discrepancy import star_discrepancy_rows
from .orbit import (
    PeriodicFunction,
    SingularityError,
    _incremental_steps,
    evaluate_array,
    orbit_matrix,
    required_bits,
)
from .rng import (
    STREAM_CONTROL,
    STREAM_IID,
    random_words,
    replica_generator,
    uniform_open,
)
from .seqgen import IntegerSequence, SequenceSpec, check_polynomial_gap, generate

__version__ = "0.1.0"

_BLOCK = 512  # replica block size; fixed so thread count cannot change results


# ---------------------------------------------------------------------------
# empirical CDFs and Kolmogorov-Smirnov distances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalCDF:
    """Sorted sample with right-continuous evaluation t -> #{x <= t}/M."""

    samples: np.ndarray

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=np.float64))
        if arr.size == 0:
            raise ValueError("empty sample")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return int(self.samples.size)

    def __call__(self, t) -> float:
        return float(np.searchsorted(self.samples, t, side="right") / len(self))


def ks_distance(ecdf: EmpiricalCDF, reference: Callable[[np.ndarray], np.ndarray]) -> float:
    """Exact sup |F_hat - F| over the sample's jump points."""
    x = ecdf.samples
    m = x.size
    ref = np.asarray(reference(x), dtype=np.float64)
    upper = np.arange(1, m + 1) / m - ref
    lower = ref - np.arange(0, m) / m
    return float(max(upper.max(), lower.max(), 0.0))


def two_sample_ks(a, b) -> float:
    """Exact sup over jump points of |F_A - F_B| for two samples."""
    xa = np.sort(np.asarray(a, dtype=np.float64))
    xb = np.sort(np.asarray(b, dtype=np.float64))
    if xa.size == 0 or xb.size == 0:
        raise ValueError("empty sample")
    grid = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, grid, side="right") / xa.size
    fb = np.searchsorted(xb, grid, side="right") / xb.size
    return float(np.abs(fa - fb).max())


def dkw_slack(m: int, confidence_tail: float = 0.01) -> float:
    """Two-sided distribution-free slack: 2 sqrt(ln(2/tail) / (2 M))."""
    return 2.0 * math.sqrt(math.log(2.0 / confidence_tail) / (2.0 * m))


# ---------------------------------------------------------------------------
# reference distributions
# ---------------------------------------------------------------------------

def kolmogorov_cdf(t: float) -> float:
    """K(t) = 1 - 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2), 0 for t <= 0.

    For small t the theta-dual form sqrt(2 pi)/t sum exp(-(2k-1)^2 pi^2 /
    (8 t^2)) is used; both are summed to below 1e-16 per term.
    """
    if t <= 0.0:
        return 0.0
    if t < 0.2:
        acc = 0.0
        k = 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * t * t))
            acc += term
            if term < 1e-18:
                break
            k += 1
        return min(1.0, math.sqrt(2.0 * math.pi) / t * acc)
    acc = 0.0
    sign = 1.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * t * t)
        acc += sign * term
        if term < 1e-16:
            break
        sign = -sign
        k += 1
    return max(0.0, min(1.0, 1.0 - 2.0 * acc))


def kolmogorov_cdf_array(t: np.ndarray) -> np.ndarray:
    return np.asarray([kolmogorov_cdf(float(v)) for v in np.atleast_1d(t)])


def normal_cdf(t: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def normal_cdf_array(t: np.ndarray) -> np.ndarray:
    return ndtr(np.asarray(t, dtype=np.float64))


def frechet_cdf(t: float, alpha: float) -> float:
    """G(t) = exp(-t^-alpha) on (0, inf), 0 elsewhere."""
    if t <= 0.0:
        return 0.0
    return math.exp(-(t ** (-alpha)))


def frechet_cdf_array(t: np.ndarray, alpha: float) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-(t[pos] ** (-alpha)))
    return out


class ErdosFortetCDF:
    """Gaussian variance mixture int_0^1 Phi(x / (sqrt(2) |cos pi t|)) dt by
    midpoint quadrature; the even node count keeps t = 1/2 off the grid.
    The discretized mixture has variance exactly 1."""

    def __init__(self, nodes: int = 1 << 13):
        if nodes < 64 or nodes % 2:
            raise ValueError("need an even node count >= 64")
        t = (np.arange(nodes) + 0.5) / nodes
        self.scales = np.sqrt(2.0) * np.abs(np.cos(np.pi * t))
        self.nodes = nodes

    def __call__(self, x) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.empty_like(xs)
        chunk = max(1, (1 << 22) // self.nodes)
        for i in range(0, xs.size, chunk):
            block = xs[i : i + chunk]
            out[i : i + chunk] = ndtr(block[:, None] / self.scales[None, :]).mean(axis=1)
        return out if np.ndim(x) else out[0]

    def variance(self) -> float:
        """Second moment of the mixture (the first moment is 0)."""
        return float(np.mean(self.scales**2))


def erdos_fortet_cdf(x: float, nodes: int = 1 << 13) -> float:
    return float(ErdosFortetCDF(nodes=nodes)(x))


# ---------------------------------------------------------------------------
# variance and covariance references
# ---------------------------------------------------------------------------

def cross_correlation_integral(
    f: PeriodicFunction, n: int, quad_points: int = 1 << 14
) -> float:
    """int_0^1 f(x) f(n x) dx; closed form for harmonic variants (frequency
    matching), the centered fractional part (1/(12 n)) and the square wave
    (1/n for odd n, 0 for even), midpoint quadrature otherwise."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if f.kind in ("harmonic", "erdos_fortet"):
        coeffs = _harmonic_coeffs(f)
        jmax = len(coeffs)
        acc = 0.0
        for j2 in range(1, jmax + 1):
            j1 = n * j2
            if j1 <= jmax:
                a1, b1 = coeffs[j1 - 1]
                a2, b2 = coeffs[j2 - 1]
                acc += 0.5 * (a1 * a2 + b1 * b2)
        return acc
    if f.kind == "centered_frac":
        return 1.0 / (12.0 * n)
    if f.kind == "sign_sine":
        return 0.0 if n % 2 == 0 else 1.0 / n
    u = (np.arange(quad_points) + 0.5) / quad_points
    return float(np.mean(evaluate_array(f, u) * evaluate_array(f, np.mod(n * u, 1.0))))


def _harmonic_coeffs(f: PeriodicFunction) -> list[tuple[float, float]]:
    if f.kind == "erdos_fortet":
        return [(1.0, 0.0), (1.0, 0.0)]
    return list(f.coeffs)


def square_norm(f: PeriodicFunction, quad_points: int = 1 << 14) -> float:
    """int_0^1 f(x)^2 dx; closed forms where the catalog admits them."""
    if f.kind in ("harmonic", "erdos_fortet"):
        return sum(0.5 * (a * a + b * b) for a, b in _harmonic_coeffs(f))
    if f.kind == "centered_frac":
        return 1.0 / 12.0
    if f.kind == "sign_sine":
        return 1.0
    if f.kind == "centered_indicator":
        return f.t * (1.0 - f.t)
    u = (np.arange(quad_points) + 0.5) / quad_points
    v = evaluate_array(f, u)
    return float(np.mean(v * v))


def kac_variance(f: PeriodicFunction, kmax: int = 20, quad_points: int = 1 << 14) -> float:
    """sigma^2 = int f^2 + 2 sum_{k=1..kmax} int f(x) f(2^k x) dx.

    The tail beyond kmax is geometrically small for bounded-variation f
    (kac_tail_bound reports the crude estimate)."""
    if not f.is_square_integrable():
        raise ValueError("function must be square integrable")
    terms = [square_norm(f, quad_points)]
    terms += [2.0 * cross_correlation_integral(f, 1 << k, quad_points) for k in range(1, kmax + 1)]
    return kahan_sum(terms)


def kac_tail_bound(f: PeriodicFunction, kmax: int) -> float:
    """Heuristic bound on the neglected tail 2 sum_{k>kmax} |corr_k| for
    bounded-variation catalog functions (decay like 2^-k)."""
    try:
        v = f.total_variation()
    except ValueError:
        v = 4.0 * f.sup_bound()
    return v * v * 2.0 ** (-kmax)


def gaussian_covariance(a: int, s: float, t: float, kmax: int = 40) -> float:
    """Covariance of the limiting empirical process of {a^k x}:

    Gamma(s,t) = (min(s,t) - s t)
               + sum_{k=1..kmax} [C_k(s,t) + C_k(t,s)],
    C_k(s,t) = mu{x <= s, {a^k x} <= t} - s t,

    each term integrated exactly in rational arithmetic (the integrand is
    piecewise constant with breakpoints at multiples of a^-k)."""
    if a < 2 or int(a) != a:
        raise ValueError("a must be an integer >= 2")
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    from fractions import Fraction

    fs, ft = Fraction(s), Fraction(t)
    if not (0 <= fs <= 1 and 0 <= ft <= 1):
        raise ValueError("s, t must lie in [0, 1]")
    total = min(fs, ft) - fs * ft
    power = 1
    for _ in range(kmax):
        power *= a
        total += _indicator_cross(fs, ft, power) + _indicator_cross(ft, fs, power)
    return float(total)


def _indicator_cross(s, t, power: int):
    """mu{x <= s, {P x} <= t} - s t for integer P, exactly."""
    from fractions import Fraction

    scaled = s * power
    full = scaled.numerator // scaled.denominator
    rem = scaled - full
    return (full * t + min(rem, t)) / power - s * t


# ---------------------------------------------------------------------------
# experiment harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentReport:
    command: str
    config: dict
    results: dict
    passed: bool
    samples: np.ndarray | None = None  # primary sample; never serialized

    def samples_csv(self) -> str:
        if self.samples is None:
            raise ValueError("report carries no samples")
        return "\n".join(f"{v:.17g}" for v in self.samples) + "\n"

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "config": self.config,
            "config_hash": config_hash(self.config),
            "version": __version__,
            "results": self.results,
            "pass": self.passed,
            "exit_code_advisory": 0 if self.passed else 2,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def config_hash(config: dict) -> str:
    return sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16]


def _blocks(total: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + _BLOCK, total)) for lo in range(0, total, _BLOCK)]


def _map_blocks(fn, total: int, threads: int) -> list:
    """Run fn(lo, hi) over fixed replica blocks; merge preserves block order
    so the output is independent of the worker count."""
    blocks = _blocks(total)
    if threads <= 1:
        return [fn(lo, hi) for lo, hi in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, lo, hi) for lo, hi in blocks]
        return [f.result() for f in futures]


def _orbit_words_block(seed: int, lo: int, hi: int, nwords: int) -> np.ndarray:
    rows = [random_words(seed, r, nwords) for r in range(lo, hi)]
    return np.stack(rows)


def _uniform_block(seed: int, lo: int, hi: int, n: int, stream: int) -> np.ndarray:
    rows = [uniform_open(replica_generator(seed, r, stream), n) for r in range(lo, hi)]
    return np.stack(rows)


# -- CLT ---------------------------------------------------------------------

def clt_experiment(
    theta: int = 2,
    n_terms: int = 4096,
    replicas: int = 20000,
    seed: int = 0,
    threads: int = 1,
    tol: float = 0.05,
    normalization: str = "half_n",
    f: PeriodicFunction | None = None,
    keep_samples: bool = False,
) -> ExperimentReport:
    """Normalized sums of f({theta^k x}) against the standard normal law.

    normalization: "half_n" divides by sqrt(N/2) (exact for a unit cosine,
    whose distinct integer frequencies are orthogonal), "kac" by
    sigma sqrt(N) with sigma^2 the doubling-map variance (theta = 2),
    "sample" by the sample standard deviation.
    """
    f = f if f is not None else PeriodicFunction.cosine()
    seq = generate(SequenceSpec.geometric(theta, n_terms))
    bits = required_bits(seq.terms[-1])
    nwords = bits // 64

    def block(lo, hi):
        words = _orbit_words_block(seed, lo, hi, nwords)
        u = orbit_matrix(seq, words, bits)
        return evaluate_array(f, u).sum(axis=1)

    sums = np.concatenate(_map_blocks(block, replicas, threads))
    if normalization == "half_n":
        scale = math.sqrt(n_terms / 2.0)
    elif normalization == "kac":
        if theta != 2:
            raise ValueError("kac normalization is defined for theta = 2")
        sigma2 = kac_variance(f)
        if sigma2 <= 0:
            raise ValueError("zero variance")
        scale = math.sqrt(sigma2 * n_terms)
    elif normalization == "sample":
        scale = float(np.std(sums))
        if scale == 0:
            raise ValueError("zero variance")
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    sample = np.sort(sums / scale)
    ks = ks_distance(EmpiricalCDF(sample), normal_cdf_array)
    threshold = tol + dkw_slack(replicas)
    config = {
        "theta": theta,
        "N": n_terms,
        "M": replicas,
        "seed": seed,
        "tol": tol,
        "normalization": normalization,
        "function": f.kind,
    }
    results = {
        "ks_vs_normal": ks,
        "threshold": threshold,
        "sample_mean": float(sample.mean()),
        "sample_var": float(sample.var()),
    }
    return ExperimentReport(
        "clt", config, results, bool(ks <= threshold),
        samples=sample if keep_samples else None,
    )


# -- Erdos-Fortet -------------------------------------------------------------

def erdos_fortet_experiment(
    n_terms: int = 4096,
    replicas: int = 20000,
    seed: int = 0,
    threads: int = 1,
    tol: float = 0.05,
    mixture_nodes: int = 1 << 13,
    keep_samples: bool = False,
) -> ExperimentReport:
    """Sums of cos 2 pi x + cos 4 pi x along n_k = 2^k - 1, normalized by
    sqrt(N) (the distinct frequencies make Var S_N = N exactly and the
    mixture has unit variance). Reports the KS distance to the Gaussian
    mixture and, as a negative control, to the pure normal law."""
    f = PeriodicFunction.erdos_fortet()
    seq = generate(SequenceSpec.geometric_minus_one(2, n_terms))
    bits = required_bits(seq.terms[-1])
    nwords = bits // 64

    def block(lo, hi):
        words = _orbit_words_block(seed, lo, hi, nwords)
        u = orbit_matrix(seq, words, bits)
        return evaluate_array(f, u).sum(axis=1)

    sums = np.concatenate(_map_blocks(block, replicas, threads))
    sample = np.sort(sums / math.sqrt(n_terms))
    mixture = ErdosFortetCDF(nodes=mixture_nodes)
    ks_mix = ks_distance(EmpiricalCDF(sample), mixture)
    ks_normal = ks_distance(EmpiricalCDF(sample), normal_cdf_array)
    threshold = tol + dkw_slack(replicas)
    config = {
        "N": n_terms,
        "M": replicas,
        "seed": seed,
        "tol": tol,
        "mixture_nodes": mixture_nodes,
    }
    results = {
        "ks_vs_mixture": ks_mix,
        "ks_vs_normal": ks_normal,
        "threshold": threshold,
        "mixture_variance": mixture.variance(),
        "sample_var": float(sample.var()),
    }
    passed = bool(ks_mix <= threshold and ks_normal > tol)
    return ExperimentReport("ef", config, results, passed,
                            samples=sample if keep_samples else None)


# -- Kolmogorov law for the discrepancy ---------------------------------------

def discrepancy_limit_experiment(
    base: int = 2,
    n_terms: int = 256,
    replicas: int = 10000,
    seed: int = 0,
    threads: int = 1,
    tol: float = 0.05,
    control: str = "sequence",
    keep_samples: bool = False,
) -> ExperimentReport:
    """sqrt(N) times the anchored (star) discrepancy of ({n_k x})_{k<=N}
    against the Kolmogorov distribution, for n_k = base^(k^2); with
    control="iid" the points are i.i.d. uniforms (the classical statistic).

    The anchored statistic is the one with the Kolmogorov limit for i.i.d.
    points; superlacunary growth couples the orbit to i.i.d. uniforms, so the
    same limit applies along the sequence.
    """
    if control not in ("sequence", "iid"):
        raise ValueError("control must be 'sequence' or 'iid'")
    if control == "sequence":
        seq = generate(SequenceSpec.superlacunary_square(base, n_terms))
        bits = required_bits(seq.terms[-1])
        nwords = bits // 64

        def block(lo, hi):
            words = _orbit_words_block(seed, lo, hi, nwords)
            u = orbit_matrix(seq, words, bits)
            return star_discrepancy_rows(u)

    else:

        def block(lo, hi):
            u = _uniform_block(seed, lo, hi, n_terms, STREAM_CONTROL)
            return star_discrepancy_rows(u)

    stats = np.concatenate(_map_blocks(block, replicas, threads))
    sample = np.sort(math.sqrt(n_terms) * stats)
    ks = ks_distance(EmpiricalCDF(sample), kolmogorov_cdf_array)
    threshold = tol + dkw_slack(replicas)
    config = {
        "base": base,
        "N": n_terms,
        "M": replicas,
        "seed": seed,
        "tol": tol,
        "control": control,
    }
    results = {"ks_vs_kolmogorov": ks, "threshold": threshold}
    return ExperimentReport("kdist", config, results, bool(ks <= threshold),
                            samples=sample if keep_samples else None)


# -- heavy tails: stable sums and Frechet maxima -------------------------------

def gamma_for_alpha(alpha: float) -> int:
    """Polynomial gap exponent sufficient for the summability condition with
    the representative heavy-tail function.

    With T_k = k^(1/alpha), |f'| <= alpha^-1 k^((1+alpha)/alpha) off the
    truncated set and a jump contribution T_k sqrt(h) in the L2 modulus, the
    series converges once gamma > 8 (1 + alpha) / alpha; the next integer up
    is returned.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    return int(math.floor(8.0 * (1.0 + alpha) / alpha)) + 1


def heavy_tail_inverse_cdf(alpha: float, u: np.ndarray) -> np.ndarray:
    """Inverse of the exact law of the heavy-tail function: F(x) = (-x)^-alpha
    for x <= -2^(1/alpha), 1 - x^-alpha above 2^(1/alpha), flat 1/2 between."""
    u = np.asarray(u, dtype=np.float64)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise ValueError("u must lie strictly inside (0, 1)")
    inv = -1.0 / alpha
    return np.where(u < 0.5, -(u**inv), (1.0 - u) ** inv)


def _heavy_orbit_reduce(
    seq: IntegerSequence,
    bits: int,
    seed: int,
    lo: int,
    hi: int,
    alpha: float,
    want_max: bool,
) -> np.ndarray:
    """Per-replica heavy-tail orbit sums or maxima via the exact modular
    recurrence. Values near the pole fall back from the 53-bit window to the
    exact numerator, and an exact hit raises."""
    steps = [(mpz(m), mpz(r)) for m, r in _incremental_steps(seq.terms)]
    first = mpz(seq.terms[0])
    mask = mpz((1 << bits) - 1)
    half = mpz(1) << (bits - 1)
    shift = bits - 53
    mid53 = 1 << 52
    inv = -1.0 / alpha
    nwords = bits // 64
    out = np.empty(hi - lo)
    for idx, rep in enumerate(range(lo, hi)):
        p = mpz(int.from_bytes(random_words(seed, rep, nwords).tobytes(), "little"))
        y = (first * p) & mask
        acc = -math.inf if want_max else 0.0
        comp = 0.0
        k = 0
        while True:
            t53 = int(y >> shift)
            dd = t53 - mid53
            if -1048576 < dd < 1048576:  # within 2^20 windows of the pole
                d_exact = int(y - half)
                if d_exact == 0:
                    raise SingularityError(f"orbit hit 1/2 exactly at k={k + 1}")
                nb = abs(d_exact).bit_length()
                top = abs(d_exact) >> max(nb - 53, 0)
                dist = math.ldexp(float(top), max(nb - 53, 0) - bits)
                val = math.copysign(dist**inv, d_exact)
            else:
                val = math.copysign((abs(dd) * 2.0**-53) ** inv, dd)
            if want_max:
                if val > acc:
                    acc = val
            else:
                t = acc + val
                if abs(acc) >= abs(val):
                    comp += (acc - t) + val
                else:
                    comp += (val - t) + acc
                acc = t
            if k == len(steps):
                break
            m, r = steps[k]
            y = (m * y + r * p) & mask
            k += 1
        out[idx] = acc if want_max else acc + comp
    return out


def stable_experiment(
    alpha: float = 1.5,
    n_terms: int = 1024,
    replicas: int = 10000,
    seed: int = 0,
    threads: int = 1,
    tol: float = 0.05,
    calibration_tol: float = 0.03,
    gamma: float | None = None,
    n1: int = 1,
    keep_samples: bool = False,
) -> ExperimentReport:
    """Two-sample comparison of S_N / N^(1/alpha) along a polynomial-gap
    sequence against i.i.d. sums from the exact heavy-tail law.

    Both samples converge to the same alpha-stable limit (centering is 0 by
    the symmetry of the function), so their KS distance vanishes; a second
    i.i.d. batch calibrates the two-sample noise floor.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    g = gamma if gamma is not None else gamma_for_alpha(alpha)
    seq = generate(SequenceSpec.power_gap(float(g), n1, n_terms))
    if not check_polynomial_gap(seq, float(g)):
        raise ValueError("sequence fails its own polynomial gap condition")
    bits = required_bits(seq.terms[-1])
    scale = float(n_terms) ** (1.0 / alpha)

    def block_orbit(lo, hi):
        return _heavy_orbit_reduce(seq, bits, seed, lo, hi, alpha, want_max=False)

    def block_iid(stream):
        def fn(lo, hi):
            u = _uniform_block(seed, lo, hi, n_terms, stream)
            return heavy_tail_inverse_cdf(alpha, u).sum(axis=1)

        return fn

    orbit_sums = np.concatenate(_map_blocks(block_orbit, replicas, threads)) / scale
    iid_sums = np.concatenate(_map_blocks(block_iid(STREAM_IID), replicas, threads)) / scale
    iid_sums2 = np.concatenate(_map_blocks(block_iid(STREAM_CONTROL), replicas, threads)) / scale
    ks = two_sample_ks(orbit_sums, iid_sums)
    ks_calib = two_sample_ks(iid_sums, iid_sums2)
    threshold = tol + dkw_slack(replicas)
    config = {
        "alpha": alpha,
        "gamma": g,
        "n1": n1,
        "N": n_terms,
        "M": replicas,
        "seed": seed,
        "tol": tol,
        "calibration_tol": calibration_tol,
    }
    results = {
        "ks_two_sample": ks,
        "ks_calibration": ks_calib,
        "threshold": threshold,
        "centering": 0.0,
        "scaling": scale,
    }
    passed = bool(ks <= threshold and ks_calib <= calibration_tol + dkw_slack(replicas))
    return ExperimentReport("stable", config, results, passed,
                            samples=np.sort(orbit_sums) if keep_samples else None)


def frechet_experiment(
    alpha: float = 1.0,
    n_terms: int = 1024,
    replicas: int = 10000,
    seed: int = 0,
    threads: int = 1,
    tol: float = 0.05,
    control_tol: float = 0.03,
    gamma: float | None = None,
    n1: int = 1,
    keep_samples: bool = False,
) -> ExperimentReport:
    """max f({n_k x}) / n^(1/alpha) against the Frechet law exp(-x^-alpha).

    The exact upper tail 1 - F(t) = t^-alpha makes b_n = n^(1/alpha), a_n = 0
    the classical norming; an i.i.d. control batch is checked against the
    same limit."""
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    g = gamma if gamma is not None else gamma_for_alpha(alpha)
    seq = generate(SequenceSpec.power_gap(float(g), n1, n_terms))
    if not check_polynomial_gap(seq, float(g)):
        raise ValueError("sequence fails its own polynomial gap condition")
    bits = required_bits(seq.terms[-1])
    scale = float(n_terms) ** (1.0 / alpha)

    def block_orbit(lo, hi):
        return _heavy_orbit_reduce(seq, bits, seed, lo, hi, alpha, want_max=True)

    def block_iid(lo, hi):
        u = _uniform_block(seed, lo, hi, n_terms, STREAM_IID)
        return heavy_tail_inverse_cdf(alpha, u).max(axis=1)

    orbit_max = np.concatenate(_map_blocks(block_orbit, replicas, threads)) / scale
    iid_max = np.concatenate(_map_blocks(block_iid, replicas, threads)) / scale
    ref = lambda t: frechet_cdf_array(t, alpha)
    ks = ks_distance(EmpiricalCDF(orbit_max), ref)
    ks_control = ks_distance(EmpiricalCDF(iid_max), ref)
    threshold = tol + dkw_slack(replicas)
    config = {
        "alpha": alpha,
        "gamma": g,
        "n1": n1,
        "N": n_terms,
        "M": replicas,
        "seed": seed,
        "tol": tol,
        "control_tol": control_tol,
    }
    results = {
        "ks_vs_frechet": ks,
        "ks_control_vs_frechet": ks_control,
        "threshold": threshold,
        "reference_at_1": math.exp(-1.0),
    }
    passed = bool(ks <= threshold and ks_control <= control_tol + dkw_slack(replicas))
    return ExperimentReport("frechet", config, results, passed,
                            samples=np.sort(orbit_max) if keep_samples else None)


# -- exploratory LIL traces ----------------------------------------------------

@dataclass(frozen=True)
class LilTrace:
    checkpoints: tuple[int, ...]
    sum_statistic: tuple[float, ...]
    discrepancy_statistic: tuple[float, ...]

    def to_csv(self) -> str:
        lines = ["N,sum_statistic,discrepancy_statistic"]
        for n, s, d in zip(self.checkpoints, self.sum_statistic, self.discrepancy_statistic):
            lines.append(f"{n},{s!r},{d!r}")
        return "\n".join(lines) + "\n"


def lil_trace(
    f: PeriodicFunction | None = None,
    theta: int = 2,
    max_n: int = 1 << 16,
    seed: int = 0,
    checkpoints: Iterable[int] | None = None,
) -> LilTrace:
    """Exploratory running values of S_N / sqrt(N log log N) and of the
    discrepancy statistic N D_N / sqrt(2 N log log N) along n_k = theta^k for
    one sample x. No assertions: iterated-logarithm limits are not reachable
    at desk scale."""
    from .discrepancy import PointSet, discrepancy

    f = f if f is not None else PeriodicFunction.cosine()
    if theta < 2 or theta & (theta - 1):
        raise ValueError("trace supports power-of-two theta (large-N bit path)")
    cps = sorted(set(checkpoints)) if checkpoints is not None else [
        1 << j for j in range(4, max(5, max_n.bit_length()))
    ]
    cps = [c for c in cps if 16 <= c <= max_n]
    if not cps:
        raise ValueError("need checkpoints with 16 <= N <= max_n")
    n_max = max(cps)
    j = theta.bit_length() - 1
    bits = ((j * n_max + 64 + 63) // 64) * 64
    words = random_words(seed, 0, bits // 64).reshape(1, -1)
    from .orbit import _window53_matrix

    pos = bits - j * np.arange(1, n_max + 1, dtype=np.int64)
    u = _window53_matrix(words, pos).astype(np.float64)[0] * 2.0**-53
    vals = evaluate_array(f, u)
    cums = np.cumsum(vals)
    sum_stats, disc_stats = [], []
    for c in cps:
        denom = math.sqrt(c * math.log(math.log(c)))
        sum_stats.append(float(cums[c - 1]) / denom)
        d = discrepancy(PointSet(u[:c]))
        disc_stats.append(c * d / math.sqrt(2.0 * c * math.log(math.log(c))))
    return LilTrace(
        checkpoints=tuple(cps),
        sum_statistic=tuple(sum_stats),
        discrepancy_statistic=tuple(disc_stats),
    )
