"""Exact one-dimensional discrepancy of finite point sets, the bounded-variation
inequality check, and the discrepancy-based iterated-logarithm statistics.

The extreme discrepancy D_N = sup over subintervals [a, b) of the deviation
between empirical frequency and length; the star discrepancy anchors the
intervals at 0. Both come from the sorted-points formulas; an O(N^2)
brute-force oracle over candidate endpoints is kept for verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import fraction_to_float
from .orbit import FixedPointSample, PeriodicFunction, evaluate_array


@dataclass(frozen=True)
class PointSet:
    """Finite multiset of points in [0, 1), sorted on construction."""

    values: np.ndarray
    exact: tuple[Fraction, ...] | None = None

    def __init__(self, values, exact=None):
        arr = np.sort(np.asarray(values, dtype=np.float64))
        if arr.size == 0:
            raise ValueError("point set must be nonempty")
        if arr[0] < 0.0 or arr[-1] >= 1.0:
            raise ValueError("points must lie in [0, 1)")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "exact", tuple(sorted(exact)) if exact is not None else None)

    @classmethod
    def from_samples(cls, samples: Sequence[FixedPointSample]) -> "PointSet":
        exact = [s.as_fraction() for s in samples]
        return cls([s.to_float() for s in samples], exact=exact)

    def __len__(self) -> int:
        return int(self.values.size)

    def serialize(self) -> str:
        """CSV: one value per line, 17 significant digits."""
        return "\n".join(f"{v:.17g}" for v in self.values) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "PointSet":
        return cls([float(line) for line in text.split() if line.strip()])


def discrepancy(ps: PointSet) -> float:
    """Extreme discrepancy via the sorted-points formula
    D_N = 1/N + max_i(i/N - x_(i)) - min_i(i/N - x_(i)).

    Point sets built from fixed-point samples are evaluated in exact rational
    arithmetic and rendered to a double at the end.
    """
    n = len(ps)
    if ps.exact is not None:
        i_over_n = [Fraction(i, n) for i in range(1, n + 1)]
        devs = [a - b for a, b in zip(i_over_n, ps.exact)]
        return fraction_to_float(Fraction(1, n) + max(devs) - min(devs))
    dev = np.arange(1, n + 1) / n - ps.values
    return float(1.0 / n + dev.max() - dev.min())


def star_discrepancy(ps: PointSet) -> float:
    """Anchored-interval discrepancy: max_i max(x_(i) - (i-1)/N, i/N - x_(i))."""
    n = len(ps)
    if ps.exact is not None:
        best = Fraction(0)
        for i, x in enumerate(ps.exact, 1):
            best = max(best, x - Fraction(i - 1, n), Fraction(i, n) - x)
        return fraction_to_float(best)
    x = ps.values
    left = x - np.arange(0, n) / n
    right = np.arange(1, n + 1) / n - x
    return float(max(left.max(), right.max()))


def discrepancy_bruteforce(ps: PointSet, max_points: int = 2000) -> float:
    """O(N^2) oracle: the sup over [a, b) is attained with a, b drawn from the
    data points, the points nudged one ulp right, and {0, 1}. Counting uses
    left-sided binary search, so both endpoint conventions are covered."""
    n = len(ps)
    if n > max_points:
        raise ValueError(f"brute-force oracle is limited to {max_points} points")
    x = ps.values
    cand = np.unique(np.concatenate([x, np.nextafter(x, 1.5), [0.0, 1.0]]))
    counts = np.searchsorted(x, cand, side="left").astype(np.float64)
    # deviation of [a,b): (count_b - count_a)/n - (b - a); max over pairs a < b
    g = counts / n - cand
    diff = g[None, :] - g[:, None]
    iu = np.triu_indices(cand.size, k=1)
    return float(np.abs(diff[iu]).max())


def star_discrepancy_rows(points: np.ndarray) -> np.ndarray:
    """Star discrepancy of each row of an (M, N) matrix of points; the rows
    are sorted internally. Vectorized for Monte Carlo use."""
    m, n = points.shape
    xs = np.sort(points, axis=1)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    right = (grid_hi[None, :] - xs).max(axis=1)
    left = (xs - grid_lo[None, :]).max(axis=1)
    return np.maximum(left, right)


def discrepancy_rows(points: np.ndarray) -> np.ndarray:
    """Extreme discrepancy of each row of an (M, N) matrix of points."""
    m, n = points.shape
    xs = np.sort(points, axis=1)
    dev = np.arange(1, n + 1) / n - xs
    return 1.0 / n + dev.max(axis=1) - dev.min(axis=1)


@dataclass(frozen=True)
class KoksmaReport:
    lhs: float
    rhs: float
    variation: float
    holds: bool


def koksma_check(f: PeriodicFunction, ps: PointSet) -> KoksmaReport:
    """Verify |mean f(x_k) - integral f| <= 2 V_f D_N for a bounded-variation
    catalog function. The inequality is a theorem; a violation is a bug."""
    v = f.total_variation()
    if not math.isfinite(v):
        raise ValueError("function has unbounded variation")
    lhs = abs(float(np.mean(evaluate_array(f, ps.values))) - f.integral())
    rhs = 2.0 * v * discrepancy(ps)
    return KoksmaReport(lhs=lhs, rhs=rhs, variation=v, holds=lhs <= rhs + 1e-12)


def lil_statistic(ps: PointSet) -> float:
    """N D_N / sqrt(2 N log log N), natural logs; requires N >= 16 so that
    log log N is safely positive."""
    n = len(ps)
    if n < 16:
        raise ValueError("statistic requires N >= 16")
    return n * discrepancy(ps) / math.sqrt(2.0 * n * math.log(math.log(n)))


def fukuyama_constant(theta: int) -> float:
    """Limsup constant of the discrepancy LIL for n_k = theta^k.

    sqrt(42)/9 at theta = 2; sqrt((theta+1) theta (theta-2)) /
    (2 sqrt((theta-1)^3)) for even theta >= 4; sqrt(theta+1) /
    (2 sqrt(theta-1)) for odd theta >= 3.
    """
    if int(theta) != theta or theta < 2:
        raise ValueError("theta must be an integer >= 2")
    theta = int(theta)
    if theta == 2:
        return math.sqrt(42.0) / 9.0
    if theta % 2 == 0:
        return math.sqrt((theta + 1) * theta * (theta - 2)) / (2.0 * math.sqrt((theta - 1) ** 3))
    return math.sqrt(theta + 1.0) / (2.0 * math.sqrt(theta - 1.0))
