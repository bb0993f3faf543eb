"""Exact fractional-part orbits {n_k x}, the periodic-function catalog, partial
sums, the L2 modulus of continuity, truncation levels and the summability
condition evaluator.

Samples x live on a dyadic grid of B bits, so {n x} = ((n * num) mod 2^B)/2^B
is computed without any rounding. Floats only appear when a grid value is
handed to a function evaluation, always as the 53-bit truncation of the exact
value. Orbit kernels have fast paths (bit windows for power-of-two terms,
small-multiplier modular recurrences otherwise) that are tested for exact
agreement with the direct product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exact import int_to_float_scaled, kahan_sum, mpz
from .rng import random_words, words_to_int
from .seqgen import IntegerSequence, delta_fractions

_MASK53 = np.uint64((1 << 53) - 1)
_TWO_PI = 2.0 * math.pi


class SingularityError(ValueError):
    """Raised when a catalog function is evaluated at a non-removable pole."""


# ---------------------------------------------------------------------------
# fixed-point samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointSample:
    """x = numerator / 2**bits in [0, 1), held exactly."""

    numerator: int
    bits: int

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("bits must be >= 1")
        if not 0 <= self.numerator < (1 << self.bits):
            raise ValueError("numerator out of [0, 2**bits)")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.bits)

    def to_float(self) -> float:
        """53-bit truncation of the exact value (round toward zero)."""
        if self.bits <= 53:
            return math.ldexp(float(self.numerator), -self.bits)
        return int_to_float_scaled(self.numerator >> (self.bits - 53), 53)

    def satisfies_guard(self, n: int) -> bool:
        """Guard-bit rule: bits >= ceil(log2 n) + 64 for the multiplier n."""
        return self.bits >= _ceil_log2(n) + 64


def _ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n - 1).bit_length()


def required_bits(n_max: int) -> int:
    """Grid size for the guard-bit rule, rounded up to whole 64-bit words."""
    b = _ceil_log2(n_max) + 64
    return ((b + 63) // 64) * 64


def sample_point(seed: int, replica: int, bits: int) -> FixedPointSample:
    """Deterministic B-bit sample from the counter-based stream (seed, replica)."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    nwords = (bits + 63) // 64
    words = random_words(seed, replica, nwords)
    num = words_to_int(words) & ((1 << bits) - 1)
    return FixedPointSample(numerator=num, bits=bits)


def frac_multiple(x: FixedPointSample, n: int, require_guard: bool = False) -> FixedPointSample:
    """Exact {n * x} on the same B-bit grid: (n * num) mod 2**B over 2**B.

    The modular product is always exact; require_guard additionally enforces
    the guard-bit rule (bits >= ceil(log2 n) + 64) under which the grid orbit
    tracks the real-number orbit to within 2**-64 per coordinate.
    """
    if n < 1:
        raise ValueError("multiplier must be >= 1")
    if require_guard and not x.satisfies_guard(n):
        raise ValueError(
            f"guard-bit rule violated: bits={x.bits} < ceil(log2 n)+64={_ceil_log2(n) + 64}"
        )
    b = x.bits
    # power-of-two factors of n are a pure shift; multiply by the odd part only
    s = (n & -n).bit_length() - 1
    odd = n >> s
    if odd == 1:
        num = (x.numerator << s) & ((1 << b) - 1) if s else x.numerator
    else:
        num = ((odd * x.numerator) & ((1 << b) - 1))
        if s:
            num = (num << s) & ((1 << b) - 1)
    return FixedPointSample(numerator=num, bits=b)


# ---------------------------------------------------------------------------
# orbit kernels
# ---------------------------------------------------------------------------

def _incremental_steps(terms: Sequence[int]) -> list[tuple[int, int]]:
    """(m_k, r_k) with n_{k+1} = m_k * n_k + r_k; drives the modular recurrence
    y_{k+1} = (m_k y_k + r_k p) mod 2^B. Cheap whenever quotients and
    remainders are small, which covers all generator kinds in the catalog."""
    steps = []
    for k in range(len(terms) - 1):
        m, r = divmod(terms[k + 1], terms[k])
        steps.append((m, r))
    return steps


def _pow2_exponents(terms: Sequence[int]) -> list[int] | None:
    out = []
    for t in terms:
        if t & (t - 1):
            return None
        out.append(t.bit_length() - 1)
    return out


def _pow2_minus_one_exponents(terms: Sequence[int]) -> list[int] | None:
    out = []
    for t in terms:
        u = t + 1
        if u & (u - 1):
            return None
        out.append(u.bit_length() - 1)
    return out


def _window53_matrix(words: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Bits [pos-53, pos) of each row's big integer, as (M, K) uint64.

    words is (M, W) little-endian uint64; every pos must satisfy pos >= 53.
    One zero word of padding on the right covers reads past the top word.
    """
    if np.any(positions < 53):
        raise ValueError("window positions must be >= 53")
    m = words.shape[0]
    padded = np.concatenate([words, np.zeros((m, 1), dtype=np.uint64)], axis=1)
    j = (positions - 53).astype(np.int64)
    w0 = j >> 6
    off = (j & 63).astype(np.uint64)
    lo = padded[:, w0] >> off[None, :]
    hi = padded[:, w0 + 1] << ((np.uint64(64) - off) & np.uint64(63))[None, :]
    hi = np.where(off[None, :] == 0, np.uint64(0), hi)
    return (lo | hi) & _MASK53


def orbit_matrix(
    seq: IntegerSequence,
    words: np.ndarray,
    bits: int,
    n_terms: int | None = None,
) -> np.ndarray:
    """Orbit values {n_k x} for a block of samples, as (M, N) trunc-53 floats.

    words is (M, W) uint64, row r encoding x_r = int(words[r]) mod 2**bits
    with bits == 64 * W. Power-of-two term sequences reduce to vectorized bit
    windows; everything else runs the exact modular recurrence per row.
    """
    terms = seq.terms[: n_terms if n_terms is not None else len(seq)]
    n = len(terms)
    if bits != 64 * words.shape[1]:
        raise ValueError("bits must equal 64 * words-per-row")
    if bits < _ceil_log2(terms[-1]) + 64:
        raise ValueError("guard-bit rule violated for the largest term")

    expos = _pow2_exponents(terms)
    if expos is not None:
        pos = bits - np.asarray(expos, dtype=np.int64)
        win = _window53_matrix(words, pos)
        return win.astype(np.float64) * 2.0**-53

    expos = _pow2_minus_one_exponents(terms)
    if expos is not None:
        pos = bits - np.asarray(expos, dtype=np.int64)
        a = _window53_matrix(words, pos).astype(np.float64) * 2.0**-53
        x = _window53_matrix(words, np.asarray([bits], dtype=np.int64)).astype(np.float64) * 2.0**-53
        u = a - x
        u += (u < 0.0).astype(np.float64)
        u[u >= 1.0] = 0.0
        return u

    return _orbit_matrix_incremental(terms, words, bits)


def _orbit_matrix_incremental(terms, words, bits) -> np.ndarray:
    steps = [(mpz(m), mpz(r)) for m, r in _incremental_steps(terms)]
    mask = mpz((1 << bits) - 1)
    shift = bits - 53
    first = mpz(terms[0])
    m_rows = words.shape[0]
    out = np.empty((m_rows, len(terms)), dtype=np.float64)
    scale = 2.0**-53
    for i in range(m_rows):
        p = mpz(int.from_bytes(words[i].tobytes(), "little"))
        y = (first * p) & mask
        out[i, 0] = int(y >> shift) * scale
        for k, (m, r) in enumerate(steps, start=1):
            y = (m * y + r * p) & mask
            out[i, k] = int(y >> shift) * scale
    return out


def orbit_floats(seq: IntegerSequence, x: FixedPointSample, n_terms: int) -> np.ndarray:
    """Exact orbit of a single sample rendered to trunc-53 floats."""
    if n_terms > len(seq):
        raise ValueError("n_terms exceeds sequence length")
    if x.bits % 64:
        vals = [frac_multiple(x, nk, require_guard=True).to_float() for nk in seq.terms[:n_terms]]
        return np.asarray(vals)
    words = np.frombuffer(
        x.numerator.to_bytes(x.bits // 8, "little"), dtype=np.uint64
    ).reshape(1, -1).copy()
    return orbit_matrix(seq, words, x.bits, n_terms)[0]


# ---------------------------------------------------------------------------
# periodic function catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicFunction:
    """Closed catalog of mean-zero 1-periodic functions.

    kinds: harmonic (finite cosine/sine polynomial), centered_frac
    ({x} - 1/2), sign_sine (sgn sin 2 pi x), erdos_fortet
    (cos 2 pi x + cos 4 pi x), heavy_tail (+-|x - 1/2|^(-1/alpha)),
    centered_indicator (1_[0,t] - t, closed right endpoint), truncated
    (base * 1{|base| <= level}).
    """

    kind: str
    coeffs: tuple[tuple[float, float], ...] | None = None
    alpha: float | None = None
    t: float | None = None
    base: "PeriodicFunction | None" = None
    level: float | None = None

    @classmethod
    def harmonic(cls, coeffs) -> "PeriodicFunction":
        cc = tuple((float(a), float(b)) for a, b in coeffs)
        return cls(kind="harmonic", coeffs=cc)

    @classmethod
    def cosine(cls, j: int = 1, amplitude: float = 1.0) -> "PeriodicFunction":
        cc = tuple((amplitude, 0.0) if i == j else (0.0, 0.0) for i in range(1, j + 1))
        return cls(kind="harmonic", coeffs=cc)

    @classmethod
    def centered_frac(cls) -> "PeriodicFunction":
        return cls(kind="centered_frac")

    @classmethod
    def sign_sine(cls) -> "PeriodicFunction":
        return cls(kind="sign_sine")

    @classmethod
    def erdos_fortet(cls) -> "PeriodicFunction":
        return cls(kind="erdos_fortet")

    @classmethod
    def heavy_tail(cls, alpha: float) -> "PeriodicFunction":
        if not 0.0 < alpha < 2.0:
            raise ValueError("alpha must lie in (0, 2)")
        return cls(kind="heavy_tail", alpha=alpha)

    @classmethod
    def centered_indicator(cls, t: float) -> "PeriodicFunction":
        if not 0.0 <= t <= 1.0:
            raise ValueError("t must lie in [0, 1]")
        return cls(kind="centered_indicator", t=t)

    @classmethod
    def truncated(cls, base: "PeriodicFunction", level: float) -> "PeriodicFunction":
        if level <= 0:
            raise ValueError("truncation level must be positive")
        if base.kind == "truncated":
            raise ValueError("no nested truncations")
        return cls(kind="truncated", base=base, level=float(level))

    # -- analytic facts -----------------------------------------------------

    def sup_bound(self) -> float:
        """Upper bound for sup |f| (exact except for multi-term harmonics,
        where it is the coefficient l1 bound)."""
        if self.kind == "harmonic":
            return sum(math.hypot(a, b) for a, b in self.coeffs)
        if self.kind == "centered_frac":
            return 0.5
        if self.kind == "sign_sine":
            return 1.0
        if self.kind == "erdos_fortet":
            return 2.0
        if self.kind == "heavy_tail":
            return math.inf
        if self.kind == "centered_indicator":
            return max(self.t, 1.0 - self.t)
        if self.kind == "truncated":
            return min(self.base.sup_bound(), self.level)
        raise ValueError(self.kind)

    def total_variation(self) -> float:
        """Variation on [0, 1] of the periodic extension, wrap-around jump
        included. Exact for the catalog; harmonic sums use the bound
        sum 4 j R_j (exact for a single harmonic)."""
        if self.kind == "harmonic":
            return sum(4.0 * j * math.hypot(a, b) for j, (a, b) in enumerate(self.coeffs, 1))
        if self.kind == "centered_frac":
            return 2.0  # slope 1 across the period plus the unit wrap jump
        if self.kind == "sign_sine":
            return 4.0
        if self.kind == "erdos_fortet":
            return 8.5
        if self.kind == "centered_indicator":
            return 2.0
        if self.kind == "heavy_tail":
            return math.inf
        if self.kind == "truncated" and self.base.kind == "heavy_tail":
            c = 2.0 ** (1.0 / self.base.alpha)
            return 4.0 * self.level if self.level >= c else 0.0
        if self.kind == "truncated" and self.level >= self.base.sup_bound():
            return self.base.total_variation()
        raise ValueError(f"no analytic total variation for {self.kind}")

    def integral(self) -> float:
        """Integral over one period: 0 for every variant except a truncation
        that actually cuts an asymmetric base (quadrature value then)."""
        if self.kind != "truncated":
            return 0.0
        base = self.base
        if base.kind in ("heavy_tail", "centered_frac", "sign_sine"):
            return 0.0  # antisymmetric about 1/2; truncation preserves it
        if self.level >= base.sup_bound():
            return 0.0
        u = (np.arange(1 << 16) + 0.5) / (1 << 16)
        return float(np.mean(evaluate_array(self, u)))

    def is_square_integrable(self) -> bool:
        return self.kind != "heavy_tail"

    # -- evaluation ----------------------------------------------------------

    def __call__(self, u):
        return evaluate(self, u)


def evaluate(f: PeriodicFunction, u) -> float:
    """f(u) for u a unit-interval float or FixedPointSample."""
    if isinstance(u, FixedPointSample):
        if f.kind == "heavy_tail" or (f.kind == "truncated" and f.base.kind == "heavy_tail"):
            return _evaluate_heavy_exact(f, u)
        u = u.to_float()
    if not 0.0 <= u < 1.0:
        u = u - math.floor(u)
    return _evaluate_scalar(f, u)


def _evaluate_scalar(f: PeriodicFunction, u: float) -> float:
    if f.kind == "harmonic":
        return kahan_sum(
            a * math.cos(_TWO_PI * j * u) + b * math.sin(_TWO_PI * j * u)
            for j, (a, b) in enumerate(f.coeffs, 1)
        )
    if f.kind == "centered_frac":
        return u - 0.5
    if f.kind == "sign_sine":
        if u == 0.0 or u == 0.5:
            return 0.0
        return 1.0 if u < 0.5 else -1.0
    if f.kind == "erdos_fortet":
        return math.cos(_TWO_PI * u) + math.cos(2.0 * _TWO_PI * u)
    if f.kind == "heavy_tail":
        d = u - 0.5
        if d == 0.0:
            raise SingularityError("heavy_tail function is singular at u = 1/2")
        return math.copysign(abs(d) ** (-1.0 / f.alpha), d)
    if f.kind == "centered_indicator":
        return (1.0 if u <= f.t else 0.0) - f.t
    if f.kind == "truncated":
        if f.base.kind == "heavy_tail" and u == 0.5:
            return 0.0  # |f| -> inf at the pole, so the truncation zeroes it
        v = _evaluate_scalar(f.base, u)
        return v if abs(v) <= f.level else 0.0
    raise ValueError(f.kind)


def _evaluate_heavy_exact(f: PeriodicFunction, x: FixedPointSample) -> float:
    """Heavy-tail evaluation from the exact numerator; the distance to the
    pole at 1/2 is resolved to full precision, not through a 53-bit float."""
    alpha = f.alpha if f.kind == "heavy_tail" else f.base.alpha
    half = 1 << (x.bits - 1)
    d = x.numerator - half
    if d == 0:
        raise SingularityError("heavy_tail function is singular at u = 1/2")
    dist = int_to_float_scaled(abs(d), x.bits)
    if dist == 0.0:
        raise SingularityError("sample indistinguishable from the singular point")
    v = math.copysign(dist ** (-1.0 / alpha), d)
    if f.kind == "truncated" and abs(v) > f.level:
        return 0.0
    return v


def evaluate_array(f: PeriodicFunction, u: np.ndarray) -> np.ndarray:
    """Vectorized f(u) on unit-interval floats."""
    if f.kind == "harmonic":
        out = np.zeros_like(u)
        for j, (a, b) in enumerate(f.coeffs, 1):
            if a:
                out += a * np.cos((_TWO_PI * j) * u)
            if b:
                out += b * np.sin((_TWO_PI * j) * u)
        return out
    if f.kind == "centered_frac":
        return u - 0.5
    if f.kind == "sign_sine":
        out = np.where(u < 0.5, 1.0, -1.0)
        return np.where((u == 0.0) | (u == 0.5), 0.0, out)
    if f.kind == "erdos_fortet":
        return np.cos(_TWO_PI * u) + np.cos((2.0 * _TWO_PI) * u)
    if f.kind == "heavy_tail":
        d = u - 0.5
        if np.any(d == 0.0):
            raise SingularityError("heavy_tail function is singular at u = 1/2")
        return np.sign(d) * np.abs(d) ** (-1.0 / f.alpha)
    if f.kind == "centered_indicator":
        return (u <= f.t).astype(np.float64) - f.t
    if f.kind == "truncated":
        if f.base.kind == "heavy_tail":
            d = u - 0.5
            with np.errstate(divide="ignore", invalid="ignore"):
                mag = np.abs(d) ** (-1.0 / f.base.alpha)
                v = np.sign(d) * mag  # pole maps to sign 0 * inf; fixed below
            return np.where((np.abs(d) == 0.0) | (mag > f.level), 0.0, v)
        v = evaluate_array(f.base, u)
        return np.where(np.abs(v) <= f.level, v, 0.0)
    raise ValueError(f.kind)


# ---------------------------------------------------------------------------
# partial sums
# ---------------------------------------------------------------------------

def partial_sum(f: PeriodicFunction, seq: IntegerSequence, x: FixedPointSample, n_terms: int) -> float:
    """Compensated sum of f({n_k x}) for k = 1..n_terms, each term exact on
    the grid. Raises with the offending index if a term hits a singularity."""
    if n_terms > len(seq):
        raise ValueError("n_terms exceeds sequence length")
    vals = []
    for k in range(n_terms):
        xc = frac_multiple(x, seq.terms[k], require_guard=True)
        try:
            vals.append(evaluate(f, xc))
        except SingularityError as e:
            raise SingularityError(f"singular term at k={k + 1}: {e}") from e
    return kahan_sum(vals)


# ---------------------------------------------------------------------------
# L2 modulus of continuity
# ---------------------------------------------------------------------------

def l2_modulus(
    f: PeriodicFunction,
    delta: float,
    *,
    quad_points: int = 1 << 14,
    h_grid: int = 1024,
    refine_rounds: int = 3,
) -> float:
    """sup over 0 <= h <= min(delta, 1/2) of the L2 norm of f(x+h) - f(x-h).

    Harmonic variants use the closed form 2 sum R_j^2 sin^2(2 pi j h) for the
    inner integral; the centered fractional part uses 2h(1-2h). Everything
    else evaluates the integral by midpoint quadrature on a refined h-grid.
    The shift is clamped to 1/2 since larger shifts repeat by periodicity.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if not f.is_square_integrable():
        raise ValueError("function is not square integrable; truncate it first")
    delta = min(delta, 0.5)
    if delta == 0.0:
        return 0.0

    if f.kind in ("harmonic", "erdos_fortet"):
        amps2 = _harmonic_amplitudes_sq(f)
        g = lambda h: sum(r2 * math.sin(_TWO_PI * j * h) ** 2 for j, r2 in amps2)
        return math.sqrt(2.0 * _sup_on_interval(g, delta, h_grid, refine_rounds))
    if f.kind == "centered_frac":
        h = min(delta, 0.25)
        return math.sqrt(2.0 * h * (1.0 - 2.0 * h))

    u = (np.arange(quad_points) + 0.5) / quad_points

    def g(h: float) -> float:
        up = np.mod(u + h, 1.0)
        um = np.mod(u - h, 1.0)
        d = evaluate_array(f, up) - evaluate_array(f, um)
        return float(np.mean(d * d))

    return math.sqrt(_sup_on_interval(g, delta, h_grid, refine_rounds))


def _harmonic_amplitudes_sq(f: PeriodicFunction) -> list[tuple[int, float]]:
    if f.kind == "erdos_fortet":
        return [(1, 1.0), (2, 1.0)]
    return [(j, a * a + b * b) for j, (a, b) in enumerate(f.coeffs, 1) if a or b]


def _sup_on_interval(g: Callable[[float], float], delta: float, grid: int, rounds: int) -> float:
    hs = np.linspace(0.0, delta, grid + 1)
    vals = np.asarray([g(h) for h in hs])
    best_i = int(np.argmax(vals))
    best_h, best = hs[best_i], vals[best_i]
    lo = hs[max(best_i - 1, 0)]
    hi = hs[min(best_i + 1, grid)]
    for _ in range(rounds):
        hs = np.linspace(lo, hi, 65)
        vals = np.asarray([g(h) for h in hs])
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_h = vals[i], hs[i]
        lo = hs[max(i - 1, 0)]
        hi = hs[min(i + 1, 64)]
    return best


# ---------------------------------------------------------------------------
# truncation levels and tail measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationSchedule:
    levels: tuple[float, ...]

    def tail_bounds_satisfied(self, f: PeriodicFunction) -> list[bool]:
        """Per-k check of mu{|f| >= T_k} <= k^-2 (exact tail measure)."""
        return [
            tail_measure(f, tk) <= 1.0 / ((k + 1) ** 2)
            for k, tk in enumerate(self.levels)
        ]


def truncation_schedule(f: PeriodicFunction, n_levels: int) -> TruncationSchedule:
    """T_k = k**(1/alpha) for the heavy-tail variant, sup |f| otherwise.

    The heavy-tail levels follow the representative choice made alongside the
    construction; their exact exceedance measure is min(1, 2/k), which a
    validation pass (tail_bounds_satisfied) reports rather than hides.
    """
    if n_levels < 1:
        raise ValueError("need at least one level")
    if f.kind == "heavy_tail":
        levels = tuple(float(k) ** (1.0 / f.alpha) for k in range(1, n_levels + 1))
    else:
        levels = (f.sup_bound(),) * n_levels
    return TruncationSchedule(levels=levels)


def tail_measure(f: PeriodicFunction, level: float) -> float:
    """mu{x in (0,1): |f(x)| >= level}; exact for every catalog variant except
    multi-term harmonics, which fall back to a fine-grid measure."""
    if level <= 0:
        return 1.0
    if f.kind == "heavy_tail":
        return min(1.0, 2.0 * level ** (-f.alpha))
    if f.kind == "centered_frac":
        return max(0.0, 1.0 - 2.0 * level) if level <= 0.5 else 0.0
    if f.kind == "sign_sine":
        return 1.0 if level <= 1.0 else 0.0
    if f.kind == "centered_indicator":
        t = f.t
        out = 0.0
        if abs(1.0 - t) >= level:
            out += t
        if t >= level:
            out += 1.0 - t
        return out
    if f.kind == "truncated":
        if level > f.level:
            return 0.0
        inner = tail_measure(f.base, level)
        return inner - tail_measure(f.base, math.nextafter(f.level, math.inf))
    if f.kind in ("harmonic", "erdos_fortet"):
        if level > f.sup_bound():
            return 0.0
        u = (np.arange(1 << 18) + 0.5) / (1 << 18)
        return float(np.mean(np.abs(evaluate_array(f, u)) >= level))
    raise ValueError(f.kind)


# ---------------------------------------------------------------------------
# summability condition for the coupling approximation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    """Finite-window diagnostic for the series sum_k (T_k delta_k^{1/4}
    + omega_2^{1/2}(f_{T_k}, 8 delta_k^{1/2})). The verdict is a statement
    about the computed window only, never about the infinite series."""

    ks: tuple[int, ...]
    levels: tuple[float, ...]
    deltas: tuple[float, ...]
    level_terms: tuple[float, ...]
    omega_terms: tuple[float, ...]
    partial_sums: tuple[float, ...]
    verdict: str
    window: str

    @property
    def terms(self) -> tuple[float, ...]:
        return tuple(a + b for a, b in zip(self.level_terms, self.omega_terms))

    def to_csv(self) -> str:
        lines = ["k,T_k,delta_k,omega2_term,partial_sum"]
        for k, tk, dk, om, ps in zip(
            self.ks, self.levels, self.deltas, self.omega_terms, self.partial_sums
        ):
            lines.append(f"{k},{tk!r},{dk!r},{om!r},{ps!r}")
        return "\n".join(lines) + "\n"


def gap_condition_series(
    f: PeriodicFunction,
    seq: IntegerSequence,
    n_terms: int,
    *,
    quad_points: int = 1 << 12,
    h_grid: int = 256,
) -> ConditionReport:
    """Evaluate the first n_terms of the truncation/modulus series that
    controls the almost-i.i.d. approximation of f({n_k x}).

    Term k is T_k delta_k^{1/4} + sqrt(omega_2(f_{T_k}, min(8 sqrt(delta_k),
    1/2))). The verdict classifies the window by a tail ratio test:
    plausibly_convergent, plausibly_divergent or inconclusive.
    """
    deltas = [float(d) for d in delta_fractions(seq)]
    if n_terms > len(deltas):
        raise ValueError("n_terms exceeds the usable window (needs n_{k+1})")
    schedule = truncation_schedule(f, n_terms)
    ks, levels, dd, lterms, oterms, psums = [], [], [], [], [], []
    running = 0.0
    for k in range(1, n_terms + 1):
        tk = schedule.levels[k - 1]
        dk = deltas[k - 1]
        ft = PeriodicFunction.truncated(f, tk) if f.kind == "heavy_tail" else f
        shift = min(8.0 * math.sqrt(dk), 0.5)
        om = math.sqrt(l2_modulus(ft, shift, quad_points=quad_points, h_grid=h_grid))
        lt = tk * dk**0.25
        running += lt + om
        ks.append(k)
        levels.append(tk)
        dd.append(dk)
        lterms.append(lt)
        oterms.append(om)
        psums.append(running)
    terms = [a + b for a, b in zip(lterms, oterms)]
    verdict = _ratio_verdict(terms)
    return ConditionReport(
        ks=tuple(ks),
        levels=tuple(levels),
        deltas=tuple(dd),
        level_terms=tuple(lterms),
        omega_terms=tuple(oterms),
        partial_sums=tuple(psums),
        verdict=verdict,
        window=f"k=1..{n_terms}, tail ratio test on the last {max(3, n_terms // 2)} terms",
    )


def _ratio_verdict(terms: list[float]) -> str:
    if len(terms) < 3:
        return "inconclusive"
    tail = terms[-max(3, len(terms) // 2):]
    if all(t < 1e-12 for t in tail):
        return "plausibly_convergent"
    if any(t <= 0.0 for t in tail):
        return "inconclusive"
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0]
    if not ratios:
        return "inconclusive"
    geo = math.exp(sum(math.log(r) for r in ratios) / len(ratios))
    if geo <= 0.98 and max(ratios) < 1.0:
        return "plausibly_convergent"
    if geo >= 1.0 or tail[-1] >= tail[0]:
        return "plausibly_divergent"
    return "inconclusive"
