"""Maximum-entropy projection onto prescribed pairwise source marginals.

Implemented by iterative proportional fitting (IPF) with a fixed cyclic
schedule over source-position pairs in lexicographic order, starting from a
uniform table. The fixed point is the I-projection: the maximum-entropy
distribution over the product of the source value sets that preserves every
two-way marginal of the input.

Before iterating, an exact support-reduction pass removes cells that are zero
in every feasible table. Cells killed by a zero marginal target are dropped
directly; a propagation pass then handles pinned cells (the only free cell
under some constraint) and exhausted constraints; finally any surviving cell
outside the input's own support is certified by a small linear program
(positive pairwise targets do not imply a cell is jointly feasible). Without
this, IPF approaches jointly-forced zeros only harmonically and cannot meet a
tight marginal tolerance. Cells inside the input support never need
certifying: the input itself is a feasible point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .dist import SourceSet, SourceTupleDistribution, SourceValue, pmf_entropy
from .errors import InvalidDistributionError, InvalidSourceError, IpfConvergenceError

IPF_TOL = 1e-10
IPF_MAX_CYCLES = 10_000

_PIN_TOL = 1e-12
_FEASIBILITY_TOL = 1e-9
_LP_ZERO_TOL = 1e-9

Cell = tuple[SourceValue, ...]
PairKey = tuple[int, int]


@dataclass(frozen=True)
class IpfReport:
    """Outcome of one projection: cycle count, fit quality, entropies (bits)."""

    iterations: int
    max_marginal_error: float
    converged: bool
    entropy_in: float
    entropy_out: float


@dataclass(frozen=True)
class PairwiseConstraintSet:
    """Two-way marginal targets for every unordered pair of source positions."""

    sources: tuple[SourceSet, ...]
    position_values: tuple[tuple[SourceValue, ...], ...]
    target_marginals: Mapping[PairKey, Mapping[tuple[SourceValue, SourceValue], float]]

    @classmethod
    def from_distribution(cls, std: SourceTupleDistribution) -> "PairwiseConstraintSet":
        k = len(std.sources)
        values = tuple(tuple(std.position_values(i)) for i in range(k))
        targets: dict[PairKey, dict[tuple[SourceValue, SourceValue], float]] = {}
        for i, j in itertools.combinations(range(k), 2):
            table: dict[tuple[SourceValue, SourceValue], float] = {}
            for t in std.support():
                key = (t[i], t[j])
                table[key] = table.get(key, 0.0) + std.pmf[t]
            targets[(i, j)] = table
        return cls(tuple(std.sources), values, targets)

    def pair_target(self, i: int, j: int, vi: SourceValue, vj: SourceValue) -> float:
        return self.target_marginals[(i, j)].get((vi, vj), 0.0)

    def validate_consistency(self, tol: float = 1e-12) -> None:
        """Check that every pair's one-way marginals agree across pairs."""
        k = len(self.sources)
        oneway: dict[int, dict[SourceValue, float]] = {}
        for (i, j), table in self.target_marginals.items():
            for pos, select in ((i, 0), (j, 1)):
                acc: dict[SourceValue, float] = {}
                for key, p in table.items():
                    acc[key[select]] = acc.get(key[select], 0.0) + p
                if pos not in oneway:
                    oneway[pos] = acc
                    continue
                ref = oneway[pos]
                for v in set(ref) | set(acc):
                    if abs(ref.get(v, 0.0) - acc.get(v, 0.0)) > tol:
                        raise InvalidDistributionError(
                            f"inconsistent one-way marginals at position {pos}, value {v}"
                        )
        if len(oneway) != k and k >= 2:
            raise InvalidDistributionError("constraint set does not cover all positions")


def _pair_marginal(
    pmf: Mapping[Cell, float], i: int, j: int
) -> dict[tuple[SourceValue, SourceValue], float]:
    out: dict[tuple[SourceValue, SourceValue], float] = {}
    for cell, p in pmf.items():
        if p <= 0.0:
            continue
        key = (cell[i], cell[j])
        out[key] = out.get(key, 0.0) + p
    return out


def pairwise_marginal_error(
    q: SourceTupleDistribution, constraints: PairwiseConstraintSet
) -> float:
    """Max absolute deviation of any fitted pairwise marginal cell from target."""
    if tuple(q.sources) != tuple(constraints.sources):
        raise InvalidSourceError("distribution and constraints have different sources")
    worst = 0.0
    for (i, j), table in constraints.target_marginals.items():
        fitted = _pair_marginal(q.pmf, i, j)
        for key in sorted(set(table) | set(fitted)):
            err = abs(fitted.get(key, 0.0) - table.get(key, 0.0))
            if err > worst:
                worst = err
    return worst


def _reduce_support(
    cells: list[Cell], constraints: PairwiseConstraintSet
) -> tuple[list[Cell], dict[Cell, float]]:
    """Drop cells that are zero in every feasible table; pin forced cells.

    Returns the surviving cells (sorted) and the pinned values among them.
    """
    support = set(cells)
    pinned: dict[Cell, float] = {}
    pairs = sorted(constraints.target_marginals)
    changed = True
    while changed:
        changed = False
        for pair in pairs:
            i, j = pair
            targets = constraints.target_marginals[pair]
            groups: dict[tuple[SourceValue, SourceValue], list[Cell]] = {}
            for cell in sorted(support):  # fixed order keeps float sums stable
                groups.setdefault((cell[i], cell[j]), []).append(cell)
            for key in sorted(set(targets) | set(groups)):
                target = targets.get(key, 0.0)
                members = groups.get(key, [])
                pinned_mass = sum(pinned[c] for c in members if c in pinned)
                free = [c for c in members if c not in pinned]
                residual = target - pinned_mass
                if residual < -_FEASIBILITY_TOL:
                    raise InvalidDistributionError(
                        f"infeasible pairwise constraints at pair {pair}, value {key}"
                    )
                if not free:
                    if abs(residual) > _FEASIBILITY_TOL:
                        raise InvalidDistributionError(
                            f"infeasible pairwise constraints at pair {pair}, value {key}"
                        )
                    continue
                if residual <= _PIN_TOL:
                    for c in free:
                        support.discard(c)
                    changed = True
                elif len(free) == 1:
                    pinned[free[0]] = residual
                    changed = True
    pinned = {c: v for c, v in pinned.items() if c in support}
    return sorted(support), pinned


def _lp_certified_support(
    cells: list[Cell],
    pinned: dict[Cell, float],
    constraints: PairwiseConstraintSet,
    input_support: set[Cell],
) -> tuple[list[Cell], dict[Cell, float]]:
    """Drop cells whose maximum feasible mass is zero.

    Only cells outside the input support are probed; the input is feasible,
    so its support cells always admit positive mass. Removing a certified
    zero cell does not change the feasible set, so probes are independent.
    """
    probe = sorted(c for c in cells if c not in input_support and c not in pinned)
    if not probe:
        return cells, pinned
    from scipy.optimize import linprog  # deferred: most supports never get here

    pairs = sorted(constraints.target_marginals)
    rows = []
    rhs = []
    for pair in pairs:
        i, j = pair
        for key, target in sorted(constraints.target_marginals[pair].items()):
            rows.append([1.0 if (c[i], c[j]) == key else 0.0 for c in cells])
            rhs.append(target)
    removed = set()
    for cell in probe:
        objective = [-1.0 if c == cell else 0.0 for c in cells]
        result = linprog(
            objective, A_eq=rows, b_eq=rhs, bounds=(0.0, 1.0), method="highs"
        )
        if not result.success:
            raise InvalidDistributionError(
                f"feasibility probe failed for cell {cell}: {result.message}"
            )
        if -result.fun <= _LP_ZERO_TOL:
            removed.add(cell)
    if not removed:
        return cells, pinned
    return _reduce_support([c for c in cells if c not in removed], constraints)


def pairwise_maxent(
    std: SourceTupleDistribution,
    tol: float = IPF_TOL,
    max_cycles: int = IPF_MAX_CYCLES,
) -> tuple[SourceTupleDistribution, IpfReport]:
    """Project ``std`` onto the maxent distribution with its two-way marginals.

    For two sources the pairwise marginal is the whole joint, so the input is
    returned unchanged with a zero-iteration report. Deterministic: identical
    inputs produce bit-identical outputs.

    Raises :class:`IpfConvergenceError` (carrying the report) if the marginal
    error is still above ``tol`` after ``max_cycles`` full cycles.
    """
    k = len(std.sources)
    if k < 2:
        raise InvalidSourceError("pairwise projection needs at least two sources")
    constraints = PairwiseConstraintSet.from_distribution(std)
    constraints.validate_consistency()
    entropy_in = pmf_entropy(std.pmf[t] for t in std.support())
    if k == 2:
        report = IpfReport(
            iterations=0,
            max_marginal_error=pairwise_marginal_error(std, constraints),
            converged=True,
            entropy_in=entropy_in,
            entropy_out=entropy_in,
        )
        return std, report

    # Candidate support: the product of observed source values, minus cells
    # killed outright by a zero pairwise target.
    pairs = sorted(constraints.target_marginals)
    candidates = [
        cell
        for cell in itertools.product(*constraints.position_values)
        if all(
            constraints.pair_target(i, j, cell[i], cell[j]) > 0.0 for i, j in pairs
        )
    ]
    cells, pinned = _reduce_support(candidates, constraints)
    cells, pinned = _lp_certified_support(
        cells, pinned, constraints, set(std.support())
    )
    if not cells:
        raise InvalidDistributionError("empty feasible support")

    q: dict[Cell, float] = {cell: 1.0 / len(cells) for cell in cells}
    groups: dict[PairKey, list[tuple[float, list[Cell]]]] = {}
    for pair in pairs:
        i, j = pair
        by_value: dict[tuple[SourceValue, SourceValue], list[Cell]] = {}
        for cell in cells:
            by_value.setdefault((cell[i], cell[j]), []).append(cell)
        groups[pair] = [
            (constraints.target_marginals[pair][key], members)
            for key, members in sorted(by_value.items())
        ]

    def max_error() -> float:
        worst = 0.0
        for pair in pairs:
            fitted = _pair_marginal(q, pair[0], pair[1])
            table = constraints.target_marginals[pair]
            for key in set(table) | set(fitted):
                err = abs(fitted.get(key, 0.0) - table.get(key, 0.0))
                if err > worst:
                    worst = err
        return worst

    cycles = 0
    err = max_error()
    while err >= tol and cycles < max_cycles:
        for pair in pairs:
            for target, members in groups[pair]:
                current = 0.0
                for cell in members:
                    current += q[cell]
                if current <= 0.0:
                    raise InvalidDistributionError(
                        f"support exhausted under pair {pair} during fitting"
                    )
                factor = target / current
                for cell in members:
                    q[cell] *= factor
        cycles += 1
        err = max_error()

    out = SourceTupleDistribution(
        tuple(std.sources), {cell: q[cell] for cell in cells if q[cell] > 0.0}
    )
    report = IpfReport(
        iterations=cycles,
        max_marginal_error=err,
        converged=err < tol,
        entropy_in=entropy_in,
        entropy_out=pmf_entropy(out.pmf[t] for t in out.support()),
    )
    if not report.converged:
        raise IpfConvergenceError(
            f"IPF did not reach tolerance {tol} after {max_cycles} cycles "
            f"(marginal error {err:.3e})",
            report,
        )
    return out, report
