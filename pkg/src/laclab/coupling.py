"""Executable coupling construction: grid filtrations, conditional expectations
of {n_k x}, Prohorov distances with exact max-flow feasibility, Strassen
couplings of discrete laws, and a Monte Carlo verifier for the closeness bound
P(|{n_k x} - Z_k| >= delta_k) <= delta_k against an i.i.d. uniform sequence.

Filtration cut points live on a common integer denominator, so every measure,
conditional mean and deviation bound below is an exact rational statement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import fraction_to_float
from .rng import STREAM_AUX, replica_generator, uniform_open
from .seqgen import IntegerSequence, delta_fractions
from .orbit import required_bits, sample_point

_MAX_COMMON_DENOM = 1 << 26
_MAX_CUTS = 1 << 23
_BOUNDARY_SLACK = Fraction(1, 10**12)


# ---------------------------------------------------------------------------
# grid filtration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridFiltration:
    """Level-k partition of [0, 1) by the cut set union_j {i/n_{j+1}}.

    Cut numerators are stored over the common denominator lcm(n_1..n_{k+1});
    atoms are the left-closed intervals between consecutive cuts.
    """

    seq: IntegerSequence
    level: int
    denom: int
    cuts: np.ndarray  # sorted int64 numerators over denom, last one == denom

    @property
    def atom_count(self) -> int:
        return int(self.cuts.size)

    def atom_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        starts = np.concatenate([[0], self.cuts[:-1]])
        return starts, self.cuts.copy()

    def atoms_as_fractions(self) -> list[tuple[Fraction, Fraction]]:
        starts, ends = self.atom_bounds()
        return [
            (Fraction(int(a), self.denom), Fraction(int(b), self.denom))
            for a, b in zip(starts, ends)
        ]

    def max_atom_length(self) -> Fraction:
        starts, ends = self.atom_bounds()
        return Fraction(int((ends - starts).max()), self.denom)

    def refines(self, coarser: "GridFiltration") -> bool:
        """Every cut of the coarser filtration is a cut here (nesting)."""
        scale = self.denom // coarser.denom
        if coarser.denom * scale != self.denom:
            return False
        lifted = coarser.cuts * scale
        idx = np.searchsorted(self.cuts, lifted)
        idx = np.minimum(idx, self.cuts.size - 1)
        return bool(np.all(self.cuts[idx] == lifted))


def build_filtration(seq: IntegerSequence, level: int) -> GridFiltration:
    """Filtration at the given level; needs terms n_1..n_{level+1}.

    Desk-scale guards: the common denominator lcm(n_1..n_{level+1}) must stay
    below 2**26 and the raw cut count below 2**23.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    if len(seq) < level + 1:
        raise ValueError("sequence too short for this level")
    used = seq.terms[: level + 1]
    denom = 1
    for n in used:
        denom = math.lcm(denom, n)
        if denom > _MAX_COMMON_DENOM:
            raise ValueError("filtration guard: common denominator exceeds 2**26")
    if sum(used) > _MAX_CUTS:
        raise ValueError("filtration guard: cut count exceeds 2**23")
    pieces = [np.arange(1, n + 1, dtype=np.int64) * (denom // n) for n in used]
    cuts = np.unique(np.concatenate(pieces))
    return GridFiltration(seq=seq, level=level, denom=denom, cuts=cuts)


# ---------------------------------------------------------------------------
# discrete distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteDistribution:
    """Finitely supported law on [0, 1] with exact rational masses."""

    support: tuple[Fraction, ...]
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.masses) or not self.support:
            raise ValueError("support and masses must be nonempty and aligned")
        if any(m <= 0 for m in self.masses):
            raise ValueError("masses must be positive")
        if sum(self.masses, Fraction(0)) != 1:
            raise ValueError("masses must sum to exactly 1")
        if any(not 0 <= s <= 1 for s in self.support):
            raise ValueError("support must lie in [0, 1]")
        if any(a >= b for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly increasing")

    @classmethod
    def from_pairs(cls, pairs) -> "DiscreteDistribution":
        acc: dict[Fraction, Fraction] = {}
        for x, m in pairs:
            x, m = Fraction(x), Fraction(m)
            if m:
                acc[x] = acc.get(x, Fraction(0)) + m
        support = tuple(sorted(acc))
        return cls(support=support, masses=tuple(acc[s] for s in support))

    @classmethod
    def point_mass(cls, x) -> "DiscreteDistribution":
        return cls(support=(Fraction(x),), masses=(Fraction(1),))

    @classmethod
    def uniform_on(cls, points) -> "DiscreteDistribution":
        pts = sorted(Fraction(p) for p in points)
        n = len(pts)
        return cls.from_pairs((p, Fraction(1, n)) for p in pts)

    def __len__(self) -> int:
        return len(self.support)


# ---------------------------------------------------------------------------
# exact bipartite transport (max flow with Fraction capacities)
# ---------------------------------------------------------------------------

class _TransportFlow:
    """Incremental max flow from P1-atoms to P2-atoms; edges are added as the
    admissible-distance threshold grows, and the previous flow stays valid."""

    def __init__(self, masses1: Sequence[Fraction], masses2: Sequence[Fraction]):
        self.n1 = len(masses1)
        self.n2 = len(masses2)
        self.excess1 = list(masses1)  # unrouted source mass
        self.excess2 = list(masses2)  # unfilled sink capacity
        self.flow: dict[tuple[int, int], Fraction] = {}
        self.adj1: list[set[int]] = [set() for _ in range(self.n1)]
        self.adj2: list[set[int]] = [set() for _ in range(self.n2)]
        self.value = Fraction(0)

    def add_pair(self, i: int, j: int) -> None:
        self.adj1[i].add(j)
        self.adj2[j].add(i)

    def augment(self) -> Fraction:
        """Push flow until no augmenting path remains; returns total value."""
        while True:
            path = self._find_path()
            if path is None:
                return self.value
            i0, edges, j_last = path
            bottleneck = min(self.excess1[i0], self.excess2[j_last])
            for (i, j, forward) in edges:
                if not forward:
                    bottleneck = min(bottleneck, self.flow[(i, j)])
            if bottleneck <= 0:
                return self.value
            self.excess1[i0] -= bottleneck
            self.excess2[j_last] -= bottleneck
            for (i, j, forward) in edges:
                key = (i, j)
                if forward:
                    self.flow[key] = self.flow.get(key, Fraction(0)) + bottleneck
                else:
                    self.flow[key] -= bottleneck
                    if not self.flow[key]:
                        del self.flow[key]
            self.value += bottleneck

    def _find_path(self):
        """BFS over the residual graph from any source with excess to any sink
        with remaining capacity. Edge capacities x->y are infinite, so the
        residual graph only constrains reverse edges by current flow."""
        from collections import deque

        parent1: dict[int, tuple[int, int] | None] = {}
        parent2: dict[int, int] = {}
        queue = deque()
        for i in range(self.n1):
            if self.excess1[i] > 0:
                parent1[i] = None
                queue.append(("x", i))
        while queue:
            side, node = queue.popleft()
            if side == "x":
                for j in sorted(self.adj1[node]):
                    if j not in parent2:
                        parent2[j] = node
                        if self.excess2[j] > 0:
                            return self._trace(node, j, parent1, parent2)
                        queue.append(("y", j))
            else:
                for i in sorted(self.adj2[node]):
                    if i not in parent1 and self.flow.get((i, node), 0) > 0:
                        parent1[i] = (node, i)
                        queue.append(("x", i))
        return None

    def _trace(self, i_last, j_last, parent1, parent2):
        edges = [(i_last, j_last, True)]
        i = i_last
        while parent1[i] is not None:
            j_prev, _ = parent1[i]
            edges.append((i, j_prev, False))
            i = parent2[j_prev]
            edges.append((i, j_prev, True))
        edges.reverse()
        return i, edges, j_last


def _pair_distances(p1: DiscreteDistribution, p2: DiscreteDistribution) -> dict[tuple[int, int], Fraction]:
    return {
        (i, j): abs(x - y)
        for i, x in enumerate(p1.support)
        for j, y in enumerate(p2.support)
    }


def prohorov_distance_exact(p1: DiscreteDistribution, p2: DiscreteDistribution) -> Fraction:
    """Prohorov distance as an exact rational.

    By the coupling characterization pi <= eps iff some coupling puts mass
    >= 1 - eps on pairs with |x - y| < eps. The unmatched mass (deficit) is a
    step function of the strict-adjacency threshold, constant between
    consecutive pairwise distances, so searching the finite candidate set
    {distances} x {deficits} yields the infimum exactly.
    """
    if len(p1) * len(p2) > 10**4:
        raise ValueError("support-size guard exceeded")
    dist = _pair_distances(p1, p2)
    thresholds = sorted(set(dist.values()))
    flow = _TransportFlow(p1.masses, p2.masses)
    best: Fraction | None = None
    # interval (c_t, c_{t+1}]: strict adjacency |x-y| < eps includes pairs <= c_t
    by_threshold: dict[Fraction, list[tuple[int, int]]] = {}
    for pair, d in dist.items():
        by_threshold.setdefault(d, []).append(pair)
    cands = [Fraction(0)] + thresholds
    for t, c in enumerate(cands):
        if c in by_threshold:
            for (i, j) in sorted(by_threshold[c]):
                flow.add_pair(i, j)
        deficit = 1 - flow.augment()
        nxt = cands[t + 1] if t + 1 < len(cands) else None
        if nxt is not None and deficit > nxt:
            continue  # no feasible eps inside (c, nxt]
        candidate = max(c, deficit)
        if best is None or candidate < best:
            best = candidate
    return best if best is not None else Fraction(0)


def prohorov_distance(p1: DiscreteDistribution, p2: DiscreteDistribution) -> float:
    return fraction_to_float(prohorov_distance_exact(p1, p2))


@dataclass(frozen=True)
class CouplingPlan:
    """Joint law with prescribed marginals; rows are (x, y, mass)."""

    rows: tuple[tuple[Fraction, Fraction, Fraction], ...]
    threshold: Fraction

    def marginal_first(self) -> DiscreteDistribution:
        return DiscreteDistribution.from_pairs((x, m) for x, _, m in self.rows)

    def marginal_second(self) -> DiscreteDistribution:
        return DiscreteDistribution.from_pairs((y, m) for _, y, m in self.rows)

    def exceedance_mass(self, eps, strict: bool = False) -> Fraction:
        """Mass on pairs with |x - y| >= eps (or > eps when strict)."""
        e = Fraction(eps)
        if strict:
            return sum((m for x, y, m in self.rows if abs(x - y) > e), Fraction(0))
        return sum((m for x, y, m in self.rows if abs(x - y) >= e), Fraction(0))


def strassen_coupling(
    p1: DiscreteDistribution, p2: DiscreteDistribution, eps
) -> CouplingPlan:
    """Coupling of p1 and p2 with mass at most eps on far pairs.

    Admissible pairs are those with |x - y| < eps (1 + 1e-12); the inflation
    resolves the open-neighborhood boundary case, where the infimum defining
    the Prohorov distance is not attained. Requires eps >= pi(p1, p2) - 1e-9;
    below feasibility the constructor refuses. Residual mass after the max
    flow is matched lexicographically.
    """
    eps_frac = Fraction(eps)
    if eps_frac < 0:
        raise ValueError("eps must be >= 0")
    threshold = eps_frac * (1 + _BOUNDARY_SLACK)
    dist = _pair_distances(p1, p2)
    flow = _TransportFlow(p1.masses, p2.masses)
    for (i, j), d in sorted(dist.items(), key=lambda kv: (kv[1], kv[0])):
        if d <= threshold:
            flow.add_pair(i, j)
    value = flow.augment()
    deficit = 1 - value
    if deficit > eps_frac + Fraction(1, 10**9):
        raise ValueError(
            f"eps below feasibility: unmatched mass {float(deficit):.3g} exceeds eps"
        )
    rows = [
        (p1.support[i], p2.support[j], m)
        for (i, j), m in sorted(flow.flow.items())
        if m > 0
    ]
    # residual mass: lexicographic matching of leftover source/sink mass
    left = [(p1.support[i], flow.excess1[i]) for i in range(len(p1)) if flow.excess1[i] > 0]
    right = [(p2.support[j], flow.excess2[j]) for j in range(len(p2)) if flow.excess2[j] > 0]
    li = ri = 0
    while li < len(left) and ri < len(right):
        x, mx = left[li]
        y, my = right[ri]
        m = min(mx, my)
        rows.append((x, y, m))
        mx -= m
        my -= m
        if mx:
            left[li] = (x, mx)
        else:
            li += 1
        if my:
            right[ri] = (y, my)
        else:
            ri += 1
    return CouplingPlan(rows=tuple(sorted(rows)), threshold=threshold)


# ---------------------------------------------------------------------------
# conditional expectation of {n_k x} on the filtration atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionalMeanStep:
    """E({n_k x} | level-k atoms): piecewise-constant values with the exact
    per-atom deviation bound sup |{n_k x} - value| <= n_k / n_{k+1}."""

    filtration: GridFiltration
    k: int
    value_numerators: np.ndarray  # over denominator 2 * denom
    value_denom: int
    distribution: DiscreteDistribution | None
    max_deviation: Fraction
    deviation_bound: Fraction
    bound_holds: bool

    def value_on_atom(self, index: int) -> Fraction:
        return Fraction(int(self.value_numerators[index]), self.value_denom)


def conditional_expectation_step(
    seq: IntegerSequence, k: int, max_support: int = 1 << 16
) -> ConditionalMeanStep:
    """Exact conditional mean of {n_k x} given the level-k filtration.

    On every atom the integrand is affine (its wrap points are cut points),
    so the mean is (T(a) + T(b-)) / 2 and the supremum deviation is
    n_k (b - a) / 2, both exact integers over twice the common denominator.
    """
    if not 1 <= k <= len(seq) - 1:
        raise ValueError("k must satisfy 1 <= k <= len(seq) - 1")
    filt = build_filtration(seq, k)
    nk = seq.terms[k - 1]
    nk1 = seq.terms[k]
    d = filt.denom
    starts, ends = filt.atom_bounds()
    t_start = (nk * starts) % d
    lengths = ends - starts
    # affine on each atom: value = T(start) + slope * len / 2 over denom 2d
    value_nums = 2 * t_start + nk * lengths
    max_dev_num = int((nk * lengths).max())  # over denom 2d
    max_dev = Fraction(max_dev_num, 2 * d)
    bound = Fraction(nk, nk1)
    holds = max_dev <= bound
    dist = None
    uniq, inv = np.unique(value_nums, return_inverse=True)
    if uniq.size <= max_support:
        mass_num = np.zeros(uniq.size, dtype=np.int64)
        np.add.at(mass_num, inv, lengths)
        dist = DiscreteDistribution.from_pairs(
            (Fraction(int(v), 2 * d), Fraction(int(m), d)) for v, m in zip(uniq, mass_num)
        )
    return ConditionalMeanStep(
        filtration=filt,
        k=k,
        value_numerators=value_nums,
        value_denom=2 * d,
        distribution=dist,
        max_deviation=max_dev,
        deviation_bound=bound,
        bound_holds=holds,
    )


@dataclass(frozen=True)
class GoodAtoms:
    """Cells [i/n_{k+1}, (i+1)/n_{k+1}) without interior points of the
    previous-level cut set, plus the exact measure bound 1 - 2 n_k/n_{k+1}."""

    k: int
    cell_denominator: int
    bad_cells: np.ndarray
    measure: Fraction
    bound: Fraction
    bound_holds: bool
    side_condition_holds: bool  # n_1 + ... + n_k <= 2 n_k at this k

    @property
    def good_count(self) -> int:
        return self.cell_denominator - int(self.bad_cells.size)


def good_atoms(seq: IntegerSequence, k: int) -> GoodAtoms:
    """Exact good-cell measure at level k: cells [i/n_{k+1}, (i+1)/n_{k+1})
    whose interior avoids every level-(k-1) cut point.

    The 1 - 2 eps_k bound is guaranteed once the partial sums satisfy
    n_1 + ... + n_k <= 2 n_k; earlier k are reported as pre-asymptotic
    through the side-condition flag rather than failed. k = 0 is degenerate
    (no earlier cuts): every cell is good."""
    if not 0 <= k <= len(seq) - 1:
        raise ValueError("k must satisfy 0 <= k <= len(seq) - 1")
    nk1 = seq.terms[k]
    if k == 0:
        bad = np.empty(0, dtype=np.int64)
        bound = Fraction(0)
        side = True
    else:
        prev = build_filtration(seq, k - 1)
        cuts = prev.cuts[:-1]  # the point 1 is never interior
        prod = cuts.astype(object) * nk1  # exact, avoids int64 overflow
        cells = np.array([int(p) // prev.denom for p in prod], dtype=np.int64)
        interior = np.array([int(p) % prev.denom != 0 for p in prod], dtype=bool)
        bad = np.unique(cells[interior])
        bound = 1 - 2 * Fraction(seq.terms[k - 1], nk1)
        side = sum(seq.terms[:k]) <= 2 * seq.terms[k - 1]
    measure = Fraction(nk1 - int(bad.size), nk1)
    return GoodAtoms(
        k=k,
        cell_denominator=nk1,
        bad_cells=bad,
        measure=measure,
        bound=bound,
        bound_holds=measure >= bound,
        side_condition_holds=side,
    )


# ---------------------------------------------------------------------------
# end-to-end Monte Carlo verification of the closeness bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingRow:
    k: int
    n_k: int
    eps_k: float
    delta_k: float
    exceedance: float
    samples: int
    passed: bool
    vacuous: bool


@dataclass(frozen=True)
class CouplingReport:
    rows: tuple[CouplingRow, ...]
    seed: int
    z_samples: np.ndarray | None = None
    digit_counts: np.ndarray | None = None
    digit_levels: int = 0

    def to_csv(self) -> str:
        lines = ["k,n_k,eps_k,delta_k,exceedance,M,pass"]
        for r in self.rows:
            lines.append(
                f"{r.k},{r.n_k},{r.eps_k!r},{r.delta_k!r},{r.exceedance!r},{r.samples},{r.passed}"
            )
        return "\n".join(lines) + "\n"

    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)


def wilson_upper_slack(p: float, m: int, z: float = 3.0) -> float:
    """Additive slack of a z-sigma Wilson-style interval around p."""
    p = min(max(p, 0.0), 1.0)
    return z * math.sqrt(p * (1.0 - p) / m + 1e-18) + z * z / (2.0 * m)


def simulate_coupling(
    seq: IntegerSequence,
    levels: int,
    replicas: int,
    seed: int,
    *,
    collect_samples: bool = False,
    digit_levels: int = 0,
) -> CouplingReport:
    """Monte Carlo run of the grid-filtration construction.

    For each replica x on the dyadic grid and each k <= levels, the cell of
    the previous-level grid containing x is located; on good cells the
    conditional law of the cell mean (discretized uniform on the sub-grid) is
    coupled to itself through the Strassen transport, and the coupled value
    is spread across its sub-cell with fresh uniform jitter, producing an
    exactly-uniform i.i.d. sequence (Z_k). The report compares the empirical
    exceedance P(|{n_k x} - Z_k| >= delta_k) to delta_k with Wilson slack;
    bounds with delta_k >= 1 are vacuous and marked as such.

    Requires consecutive integer ratios (every generator kind at desk scale
    that the closeness bound is non-trivially testable on); then the grids
    nest and every cell is good.
    """
    if len(seq) < levels + 1:
        raise ValueError("sequence must provide n_{levels+1}")
    terms = seq.terms[: levels + 1]
    ratios = []
    for a, b in zip(terms, terms[1:]):
        if b % a:
            raise ValueError("simulate_coupling requires integer consecutive ratios")
        ratios.append(b // a)
    deltas = [float(d) for d in delta_fractions(seq)][:levels]
    eps = [a / b for a, b in zip(terms, terms[1:])]
    bits = required_bits(terms[-1])

    # Strassen step per level: the conditional law of the cell mean on a good
    # cell is the discretized uniform on the sub-grid, for every good cell, so
    # one plan per level suffices. Sampling tables map a sub-cell index to the
    # coupled partner's sub-cell index distribution.
    samplers = []
    for k in range(levels):
        r = ratios[k]
        grid = DiscreteDistribution.uniform_on(Fraction(2 * m + 1, 2 * r) for m in range(r))
        plan = strassen_coupling(grid, grid, Fraction(terms[k], terms[k + 1]))
        samplers.append(_ConditionalSampler(plan, grid, r))

    exceed = np.zeros(levels, dtype=np.int64)
    z_all = np.empty((replicas, levels)) if collect_samples else None
    n_cells = int(np.prod([ratios[k] for k in range(min(digit_levels, levels))])) if digit_levels else 0
    counts = np.zeros(n_cells, dtype=np.int64) if digit_levels else None

    two_b = 1 << bits
    for rep in range(replicas):
        x = sample_point(seed, rep, bits)
        p = x.numerator
        aux = uniform_open(replica_generator(seed, rep, STREAM_AUX), 2 * levels)
        cell_id = 0
        for k in range(levels):
            nk = terms[k]
            prod = nk * p
            c = prod >> bits
            t_val = (prod - (c << bits)) / two_b
            c_next = (terms[k + 1] * p) >> bits
            sub = int(c_next - ratios[k] * c)
            y_sub = samplers[k].draw(sub, aux[2 * k])
            z = (y_sub + aux[2 * k + 1]) / ratios[k]
            if abs(t_val - z) >= deltas[k]:
                exceed[k] += 1
            if collect_samples:
                z_all[rep, k] = z
            if digit_levels and k < digit_levels:
                cell_id = cell_id * ratios[k] + sub
        if digit_levels:
            counts[cell_id] += 1

    rows = []
    for k in range(levels):
        p_hat = exceed[k] / replicas
        vac = deltas[k] >= 1.0
        slack = wilson_upper_slack(min(deltas[k], 1.0), replicas)
        passed = vac or p_hat <= deltas[k] + slack
        rows.append(
            CouplingRow(
                k=k + 1,
                n_k=terms[k],
                eps_k=eps[k],
                delta_k=deltas[k],
                exceedance=float(p_hat),
                samples=replicas,
                passed=bool(passed),
                vacuous=vac,
            )
        )
    return CouplingReport(
        rows=tuple(rows),
        seed=seed,
        z_samples=z_all,
        digit_counts=counts,
        digit_levels=min(digit_levels, levels) if digit_levels else 0,
    )


class _ConditionalSampler:
    """Inverse-CDF sampler of the coupled partner's sub-cell given the source
    sub-cell, derived from a coupling plan on the (2m+1)/(2r) grid."""

    def __init__(self, plan: CouplingPlan, grid: DiscreteDistribution, r: int):
        self.r = r
        tables: list[list[tuple[float, int]]] = [[] for _ in range(r)]
        index = {s: i for i, s in enumerate(grid.support)}
        mass_x = [Fraction(0)] * r
        for x, y, m in plan.rows:
            tables[index[x]].append((m, index[y]))
            mass_x[index[x]] += m
        self.cdfs = []
        for i in range(r):
            acc = Fraction(0)
            cutoffs, targets = [], []
            for m, j in tables[i]:
                acc += m / mass_x[i]
                cutoffs.append(float(acc))
                targets.append(j)
            cutoffs[-1] = 1.0 + 1e-12
            self.cdfs.append((cutoffs, targets))

    def draw(self, sub: int, u: float) -> int:
        cutoffs, targets = self.cdfs[sub]
        for c, j in zip(cutoffs, targets):
            if u < c:
                return j
        return targets[-1]
