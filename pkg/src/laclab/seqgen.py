"""Integer sequence generators, gap-condition checkers and number-theoretic sums.

All gap predicates compare exact rationals (big-integer cross multiplication);
no ratio is ever rounded before a comparison. Sums that the contract declares
exact are returned as Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import fraction_to_float, kahan_sum

# strictly-increasing safety factor for power_gap at k = 1, where k**gamma = 1
_MIN_GROWTH = Fraction(1_000_000_001, 1_000_000_000)


@dataclass(frozen=True)
class SequenceSpec:
    """Description of a sequence generator plus the number of terms."""

    kind: str
    length: int
    theta: int | None = None
    gamma: float | None = None
    n1: int | None = None
    base: int | None = None
    terms: tuple[int, ...] | None = None

    @classmethod
    def geometric(cls, theta: int, length: int) -> "SequenceSpec":
        return cls(kind="geometric", length=length, theta=theta)

    @classmethod
    def geometric_minus_one(cls, theta: int, length: int) -> "SequenceSpec":
        return cls(kind="geometric_minus_one", length=length, theta=theta)

    @classmethod
    def power_gap(cls, gamma: float, n1: int, length: int) -> "SequenceSpec":
        return cls(kind="power_gap", length=length, gamma=gamma, n1=n1)

    @classmethod
    def superlacunary_square(cls, base: int, length: int) -> "SequenceSpec":
        return cls(kind="superlacunary_square", length=length, base=base)

    @classmethod
    def explicit(cls, terms: Iterable[int]) -> "SequenceSpec":
        t = tuple(int(v) for v in terms)
        return cls(kind="explicit", length=len(t), terms=t)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "length": self.length}
        for name in ("theta", "gamma", "n1", "base"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.terms is not None:
            out["terms"] = [str(t) for t in self.terms]
        return out


@dataclass(frozen=True)
class IntegerSequence:
    """Materialized strictly increasing positive integers with provenance."""

    terms: tuple[int, ...]
    provenance: SequenceSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("sequence must be nonempty")
        prev = 0
        for t in self.terms:
            if t <= prev:
                raise ValueError("terms must be strictly increasing and >= 1")
            prev = t

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def ratios_to_next(self) -> list[Fraction]:
        """Exact n_k / n_{k+1} for k = 1..N-1 (each in (0, 1))."""
        t = self.terms
        return [Fraction(t[k], t[k + 1]) for k in range(len(t) - 1)]

    def serialize(self) -> str:
        """One decimal integer per line (terms may exceed 64 bits)."""
        return "\n".join(str(t) for t in self.terms) + "\n"

    @classmethod
    def deserialize(cls, text: str, spec: SequenceSpec | None = None) -> "IntegerSequence":
        terms = tuple(int(line) for line in text.split() if line.strip())
        return cls(terms=terms, provenance=spec)


def generate(spec: SequenceSpec) -> IntegerSequence:
    """Materialize the sequence described by spec.

    Rejects out-of-range parameters and non-increasing explicit input.
    """
    n = spec.length
    if n < 1:
        raise ValueError("length must be >= 1")
    if spec.kind == "geometric":
        theta = _check_theta(spec.theta)
        terms = tuple(theta**k for k in range(1, n + 1))
    elif spec.kind == "geometric_minus_one":
        theta = _check_theta(spec.theta)
        terms = tuple(theta**k - 1 for k in range(1, n + 1))
    elif spec.kind == "superlacunary_square":
        base = spec.base
        if base is None or base < 2:
            raise ValueError("base must be an integer >= 2")
        terms = tuple(base ** (k * k) for k in range(1, n + 1))
    elif spec.kind == "power_gap":
        terms = _power_gap_terms(spec.gamma, spec.n1, n)
    elif spec.kind == "explicit":
        if spec.terms is None:
            raise ValueError("explicit spec carries no terms")
        terms = spec.terms[:n]
    else:
        raise ValueError(f"unknown sequence kind {spec.kind!r}")
    return IntegerSequence(terms=terms, provenance=spec)


def _check_theta(theta) -> int:
    if theta is None or int(theta) != theta or theta < 2:
        raise ValueError("theta must be an integer >= 2")
    return int(theta)


def _power_gap_terms(gamma, n1, n) -> tuple[int, ...]:
    """Minimal integers with n_{k+1} >= n_k * max(k**gamma, 1 + 1e-9).

    The ceiling keeps terms integral; the 1 + 1e-9 floor keeps the sequence
    strictly increasing at k = 1 where k**gamma = 1. For integer gamma the
    growth factor k**gamma is exact; otherwise the IEEE-rounded power is
    converted to its exact rational value before the ceiling.
    """
    if gamma is None or gamma <= 0:
        raise ValueError("gamma must be > 0")
    if n1 is None or n1 < 1:
        raise ValueError("n1 must be >= 1")
    terms = [int(n1)]
    for k in range(1, n):
        factor = _power_threshold(k, gamma)
        if factor < _MIN_GROWTH:
            factor = _MIN_GROWTH
        nxt = -(-terms[-1] * factor.numerator // factor.denominator)  # ceil
        nxt = max(nxt, terms[-1] + 1)
        terms.append(nxt)
    return tuple(terms)


def _power_threshold(k: int, gamma: float) -> Fraction:
    if float(gamma).is_integer():
        return Fraction(k ** int(gamma))
    return Fraction(float(k) ** gamma)


def check_hadamard(seq: IntegerSequence, q: float) -> bool:
    """True iff n_{k+1}/n_k >= q for all k, by exact cross multiplication."""
    if q <= 1:
        raise ValueError("growth factor must exceed 1")
    qf = Fraction(q)
    t = seq.terms
    return all(t[k + 1] * qf.denominator >= qf.numerator * t[k] for k in range(len(t) - 1))


def check_polynomial_gap(seq: IntegerSequence, gamma: float) -> bool:
    """True iff n_{k+1}/n_k >= k**gamma for every k >= 1 (exact comparison).

    For non-integer gamma the threshold is the IEEE double k**gamma, compared
    exactly as a rational.
    """
    if len(seq) < 2:
        raise ValueError("need at least two terms")
    t = seq.terms
    for k in range(1, len(t)):
        thr = _power_threshold(k, gamma)
        if t[k] * thr.denominator < thr.numerator * t[k - 1]:
            return False
    return True


def delta_fractions(seq: IntegerSequence) -> list[Fraction]:
    """Exact closeness bounds: delta_1 = 1, delta_k = 5(n_{k-1}/n_k + n_k/n_{k+1}).

    Defined for k = 1..N-1; the last index would need n_{N+1} and is omitted.
    """
    t = seq.terms
    if len(t) < 2:
        raise ValueError("need at least two terms")
    out = [Fraction(1)]
    for k in range(2, len(t)):
        out.append(5 * (Fraction(t[k - 2], t[k - 1]) + Fraction(t[k - 1], t[k])))
    return out


def delta_sequence(seq: IntegerSequence) -> list[float]:
    """delta_fractions rendered to floats."""
    return [fraction_to_float(d) for d in delta_fractions(seq)]


def gcd_sum(seq: IntegerSequence) -> Fraction:
    """Sum of gcd(n_i, n_j)/lcm(n_i, n_j) over 1 <= i <= j <= N, exactly.

    Diagonal terms contribute 1 each (the sum includes them). Accumulation
    runs over the common denominator lcm(n_1..n_N) so the result is a single
    normalized Fraction even for N ~ 10^3.
    """
    t = seq.terms
    big_l = 1
    for v in t:
        big_l = math.lcm(big_l, v)
    num = 0
    n = len(t)
    for i in range(n):
        ti = t[i]
        num += big_l  # diagonal: gcd/lcm = 1
        for j in range(i + 1, n):
            g = math.gcd(ti, t[j])
            l = ti // g * t[j]
            num += g * (big_l // l)
    return Fraction(num, big_l)


def dyer_harman_sum(seq: IntegerSequence) -> float:
    """Sum of gcd(n_k, n_l)/sqrt(n_k n_l) over 1 <= k <= l <= N.

    Each term is sqrt of the exact rational gcd^2/(n_k n_l), so the value is
    invariant under scaling every term by a common factor, bit for bit.
    """
    t = seq.terms
    n = len(t)
    terms = []
    for i in range(n):
        terms.append(1.0)
        for j in range(i + 1, n):
            g = math.gcd(t[i], t[j])
            terms.append(math.sqrt(fraction_to_float(Fraction(g * g, t[i] * t[j]))))
    return kahan_sum(terms)


def divisor_count(k: int) -> int:
    """Number of divisors of k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    count = 0
    d = 1
    while d * d <= k:
        if k % d == 0:
            count += 1 if d * d == k else 2
        d += 1
    return count


def divisors(k: int) -> list[int]:
    if k < 1:
        raise ValueError("k must be >= 1")
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d * d != k:
                large.append(k // d)
        d += 1
    return small + large[::-1]


def rho_gamma(n: int, gamma: float) -> float:
    """Divisor sum of d**-(2*gamma - 1) over d | n, for gamma in (1/2, 1)."""
    if not 0.5 < gamma < 1.0:
        raise ValueError("gamma must lie in (1/2, 1)")
    expo = 2.0 * gamma - 1.0
    return kahan_sum(d ** (-expo) for d in divisors(n))


def coefficient_condition_partial_sum(
    c: Sequence[float],
    kind: str,
    *,
    eps: float | None = None,
    gamma: float | None = None,
) -> float:
    """Partial sum of the weighted coefficient series selecting a.e. convergence.

    kind:
      - "rademacher_mensov_eps": sum c_k^2 (log k)^(3+eps)
      - "weber_divisor":         sum c_k^2 d(k) (log k)^2
      - "weber_rho":             sum c_k^2 rho_gamma(k) (log k)^2

    Logs are natural; the k = 1 term has log-factor 0 by convention.
    """
    if kind == "rademacher_mensov_eps":
        if eps is None or eps <= 0:
            raise ValueError("rademacher_mensov_eps requires eps > 0")
        weight = lambda k: math.log(k) ** (3.0 + eps)
    elif kind == "weber_divisor":
        weight = lambda k: divisor_count(k) * math.log(k) ** 2
    elif kind == "weber_rho":
        if gamma is None:
            raise ValueError("weber_rho requires gamma")
        weight = lambda k: rho_gamma(k, gamma) * math.log(k) ** 2
    else:
        raise ValueError(f"unknown coefficient condition kind {kind!r}")
    terms = []
    for i, ck in enumerate(c):
        k = i + 1
        if k == 1 or ck == 0.0:
            continue
        terms.append(ck * ck * weight(k))
    return kahan_sum(terms)
