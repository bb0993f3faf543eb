"""Counting solutions of a n_k - b n_l = nu with bounded coefficients, and
finite-window profiles of the counting conditions that govern central-limit
and iterated-logarithm behavior of f({n_k x}).

Counts are over ordered quadruples (a, b, k, l) with 1 <= a, b <= d and
1 <= k, l <= N, excluding the trivial solutions k = l in the case a = b,
nu = 0. All arithmetic is exact on big integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .seqgen import IntegerSequence


@dataclass(frozen=True)
class DiophantineQuery:
    seq: IntegerSequence
    window: int
    coeff_bound: int
    offset: int

    def __post_init__(self):
        if not 1 <= self.window <= len(self.seq):
            raise ValueError("window must satisfy 1 <= N <= len(seq)")
        if self.coeff_bound < 1:
            raise ValueError("coefficient bound must be >= 1")


def count_solutions(q: DiophantineQuery) -> int:
    """Exact number of (a, b, k, l) with a n_k - b n_l = nu.

    For each coefficient pair the sorted lists {a n_k} and {b n_l + nu} are
    merged with two pointers; the strictly increasing sequence guarantees
    at most one match per (a, b, k)."""
    terms = q.seq.terms[: q.window]
    d, nu = q.coeff_bound, q.offset
    total = 0
    for a in range(1, d + 1):
        left = [a * n for n in terms]
        for b in range(1, d + 1):
            right = [b * n + nu for n in terms]
            total += _count_matches(left, right)
            if a == b and nu == 0:
                total -= len(terms)  # the trivial k = l diagonal
    return total


def _count_matches(left: Sequence[int], right: Sequence[int]) -> int:
    i = j = hits = 0
    while i < len(left) and j < len(right):
        if left[i] == right[j]:
            hits += 1
            i += 1
            j += 1
        elif left[i] < right[j]:
            i += 1
        else:
            j += 1
    return hits


def count_solutions_bruteforce(q: DiophantineQuery) -> int:
    """Quadruple-loop oracle, O(d^2 N^2); guard-limited to desk scale."""
    terms = q.seq.terms[: q.window]
    d, nu = q.coeff_bound, q.offset
    if d > 8 or len(terms) > 256:
        raise ValueError("oracle limited to d <= 8, N <= 256")
    total = 0
    for a in range(1, d + 1):
        for b in range(1, d + 1):
            for k, nk in enumerate(terms):
                for l, nl in enumerate(terms):
                    if a == b and nu == 0 and k == l:
                        continue
                    if a * nk - b * nl == nu:
                        total += 1
    return total


def default_offset_range(seq: IntegerSequence, coeff_bound: int, cap: int = 4096) -> tuple[int, ...]:
    """Default nu range: +-[1 .. 4 d g] with g the smallest consecutive gap,
    capped to keep desk-scale defaults finite (counts vanish once |nu| exceeds
    d n_N anyway). The profile reports whatever range was used."""
    t = seq.terms
    g = min((t[k + 1] - t[k] for k in range(len(t) - 1)), default=1)
    half = min(4 * coeff_bound * g, cap)
    rng = list(range(-half, 0)) + list(range(1, half + 1))
    return tuple(rng)


@dataclass(frozen=True)
class ProfileRow:
    window: int
    worst_offset: int
    count: int
    ratio: float


@dataclass(frozen=True)
class ConditionProfile:
    rows: tuple[ProfileRow, ...]
    offsets: tuple[int, ...]
    verdict: str
    kind: str

    def to_csv(self) -> str:
        lines = ["N,nu_star,L,ratio"]
        for r in self.rows:
            lines.append(f"{r.window},{r.worst_offset},{r.count},{r.ratio!r}")
        return "\n".join(lines) + "\n"


def _dyadic_windows(n: int) -> list[int]:
    out = []
    w = 2
    while w < n:
        out.append(w)
        w *= 2
    out.append(n)
    return out


def clt_condition_profile(
    seq: IntegerSequence,
    window: int,
    coeff_bound: int,
    offsets: Iterable[int] | None = None,
) -> ConditionProfile:
    """sup over nu of L(N', d, nu)/N' on a dyadic ladder N' <= N.

    The normality criterion asks for this ratio to vanish uniformly in
    nu != 0; the profile is a finite-window trend diagnostic, with nu = 0
    included only when the caller asks for it explicitly."""
    offs = tuple(offsets) if offsets is not None else default_offset_range(seq, coeff_bound)
    rows = []
    for n_prime in _dyadic_windows(window):
        worst, worst_nu = -1, 0
        for nu in offs:
            c = count_solutions(DiophantineQuery(seq, n_prime, coeff_bound, nu))
            if c > worst:
                worst, worst_nu = c, nu
        rows.append(ProfileRow(n_prime, worst_nu, worst, worst / n_prime))
    verdict = _trend_verdict([r.ratio for r in rows], vanishing_target=True)
    return ConditionProfile(rows=tuple(rows), offsets=offs, verdict=verdict, kind="clt_ratio")


def lil_condition_profile(
    seq: IntegerSequence,
    window: int,
    coeff_bound: int,
    offsets: Iterable[int] | None = None,
    eps: float = 0.1,
) -> ConditionProfile:
    """sup over nu of L(N', d, nu) (log N')^(1+eps) / N' on a dyadic ladder;
    bounded profiles support the classical LIL constant."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    offs = tuple(offsets) if offsets is not None else default_offset_range(seq, coeff_bound)
    rows = []
    for n_prime in _dyadic_windows(window):
        worst, worst_nu = -1, 0
        for nu in offs:
            c = count_solutions(DiophantineQuery(seq, n_prime, coeff_bound, nu))
            if c > worst:
                worst, worst_nu = c, nu
        scale = math.log(n_prime) ** (1.0 + eps) / n_prime if n_prime > 1 else 0.0
        rows.append(ProfileRow(n_prime, worst_nu, worst, worst * scale))
    verdict = _boundedness_verdict([r.ratio for r in rows])
    return ConditionProfile(rows=tuple(rows), offsets=offs, verdict=verdict, kind="lil_weighted")


def _trend_verdict(ratios: Sequence[float], vanishing_target: bool) -> str:
    if len(ratios) < 2:
        return "inconclusive"
    if all(r == 0.0 for r in ratios):
        return "vanishing"
    half = len(ratios) // 2
    early = max(ratios[:half]) if half else ratios[0]
    late = max(ratios[half:])
    if late == 0.0 or (early > 0 and late <= 0.5 * early):
        return "vanishing-trend"
    if late >= 0.9 * early and late > 0:
        return "non-vanishing"
    return "inconclusive"


def _boundedness_verdict(values: Sequence[float]) -> str:
    if len(values) < 2:
        return "inconclusive"
    if all(v == 0.0 for v in values):
        return "bounded"
    half = len(values) // 2
    early = max(values[:half]) if half else values[0]
    late = max(values[half:])
    if early > 0 and late > 1.5 * early:
        return "unbounded-trend"
    if late <= max(early, 1e-12):
        return "bounded"
    return "inconclusive"
