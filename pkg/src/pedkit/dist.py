"""Exact discrete joint distributions and the pointwise Shannon machinery.

Everything downstream consumes these primitives: probability mass functions
over tuples of finite-alphabet variables, marginalization, projection onto
sources (variable subsets), surprisal, entropy, mutual information, and local
co-information.

Conventions:

* All logarithms are base 2; every public quantity is in bits.
* Symbols are 0-based integers; variable indices are 1-based.
* Pointwise sums run over the support only, so ``0 * log 0`` never arises and
  explicit zero-probability rows behave exactly like absent ones.
* Values are immutable after construction and all operations are pure
  functions, so unrestricted concurrent reads are safe.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    DistributionFormatError,
    InvalidDistributionError,
    InvalidSourceError,
    UndefinedSurprisalError,
)

NORMALIZATION_TOL = 1e-9

Outcome = tuple[int, ...]
SourceValue = tuple[int, ...]


@dataclass(frozen=True)
class SourceSet:
    """A nonempty, sorted, duplicate-free set of 1-based variable indices."""

    variables: tuple[int, ...]

    def __post_init__(self):
        v = self.variables
        if not v:
            raise InvalidSourceError("a source must contain at least one variable")
        if list(v) != sorted(set(v)):
            raise InvalidSourceError(f"source variables must be sorted and unique: {v}")
        if v[0] < 1:
            raise InvalidSourceError(f"variable indices are 1-based: {v}")

    @classmethod
    def of(cls, *variables: int) -> "SourceSet":
        return cls(tuple(sorted(set(variables))))

    def issubset(self, other: "SourceSet") -> bool:
        return set(self.variables) <= set(other.variables)

    def isdisjoint(self, other: "SourceSet") -> bool:
        return set(self.variables).isdisjoint(other.variables)

    def union(self, other: "SourceSet") -> "SourceSet":
        return SourceSet.of(*self.variables, *other.variables)

    @property
    def name(self) -> str:
        return "{" + "".join(str(v) for v in self.variables) + "}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class JointDistribution:
    """Exact pmf over a tuple of finite-alphabet variables.

    ``pmf`` maps full outcome tuples to probabilities. Outcomes with zero
    probability may be present or absent; every operation here iterates over
    the support only, which makes the two representations interchangeable.
    """

    n_vars: int
    alphabet_sizes: tuple[int, ...]
    pmf: Mapping[Outcome, float]

    def __post_init__(self):
        if self.n_vars < 1:
            raise InvalidDistributionError("need at least one variable")
        if len(self.alphabet_sizes) != self.n_vars:
            raise InvalidDistributionError(
                f"{self.n_vars} variables but {len(self.alphabet_sizes)} alphabet sizes"
            )
        if any(k < 1 for k in self.alphabet_sizes):
            raise InvalidDistributionError("alphabet sizes must be positive")
        total = 0.0
        for outcome, p in self.pmf.items():
            if len(outcome) != self.n_vars:
                raise InvalidDistributionError(f"outcome {outcome} has wrong arity")
            for x, k in zip(outcome, self.alphabet_sizes):
                if not 0 <= x < k:
                    raise InvalidDistributionError(
                        f"symbol {x} outside alphabet of size {k} in outcome {outcome}"
                    )
            if p < 0.0:
                raise InvalidDistributionError(f"negative probability {p} at {outcome}")
            total += p
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def from_pmf(
        cls,
        pmf: Mapping[Outcome, float],
        alphabet_sizes: Sequence[int] | None = None,
    ) -> "JointDistribution":
        """Build a distribution, inferring arity and alphabets when omitted."""
        if not pmf:
            raise InvalidDistributionError("empty pmf")
        outcomes = list(pmf)
        n = len(outcomes[0])
        if alphabet_sizes is None:
            alphabet_sizes = tuple(
                max(o[i] for o in outcomes) + 1 for i in range(n)
            )
        return cls(n, tuple(alphabet_sizes), dict(pmf))

    def p(self, outcome: Outcome) -> float:
        return self.pmf.get(tuple(outcome), 0.0)

    def support(self) -> list[Outcome]:
        """Outcomes with positive probability, in sorted order."""
        return sorted(o for o, p in self.pmf.items() if p > 0.0)

    def outcomes(self) -> Iterable[Outcome]:
        """Every outcome of the full Cartesian product, in sorted order."""
        return itertools.product(*(range(k) for k in self.alphabet_sizes))


@dataclass(frozen=True)
class SourceTupleDistribution:
    """Joint pmf over an ordered tuple of source values.

    Each source value is the projection of an underlying outcome onto that
    source's variables. Derived by :func:`project_to_sources`, or produced by
    the maximum-entropy projection, which may move mass to any tuple
    consistent with its marginal constraints.
    """

    sources: tuple[SourceSet, ...]
    pmf: Mapping[tuple[SourceValue, ...], float]

    def __post_init__(self):
        if not self.sources:
            raise InvalidSourceError("need at least one source")
        total = 0.0
        k = len(self.sources)
        for t, p in self.pmf.items():
            if len(t) != k:
                raise InvalidDistributionError(f"tuple {t} has wrong arity")
            if p < 0.0:
                raise InvalidDistributionError(f"negative probability {p} at {t}")
            total += p
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")

    def p(self, values: tuple[SourceValue, ...]) -> float:
        return self.pmf.get(tuple(values), 0.0)

    def support(self) -> list[tuple[SourceValue, ...]]:
        return sorted(t for t, p in self.pmf.items() if p > 0.0)

    def position_values(self, i: int) -> list[SourceValue]:
        """Sorted values observed at position ``i`` of the source tuple."""
        return sorted({t[i] for t, p in self.pmf.items() if p > 0.0})

    @cached_property
    def _submarginals(self) -> dict[tuple[int, ...], dict[tuple[SourceValue, ...], float]]:
        # All 2^k - 1 sub-marginal tables, built in one pass over the support:
        # local co-information looks every one of them up at every point.
        k = len(self.sources)
        tables: dict[tuple[int, ...], dict[tuple[SourceValue, ...], float]] = {}
        for size in range(1, k + 1):
            for pos in itertools.combinations(range(k), size):
                tables[pos] = {}
        for t in self.support():
            p = self.pmf[t]
            for pos, table in tables.items():
                sub = tuple(t[i] for i in pos)
                table[sub] = table.get(sub, 0.0) + p
        return tables

    def submarginal(self, positions: tuple[int, ...]) -> Mapping[tuple[SourceValue, ...], float]:
        """Marginal over the given source positions (ascending tuple)."""
        return self._submarginals[tuple(positions)]


def _check_source(d: JointDistribution, source: SourceSet) -> None:
    if source.variables[-1] > d.n_vars:
        raise InvalidSourceError(
            f"source {source} references variable beyond n_vars={d.n_vars}"
        )


def pmf_entropy(probabilities: Iterable[float]) -> float:
    """Entropy in bits of an iterable of probabilities; zeros contribute 0."""
    total = 0.0
    for p in probabilities:
        if p > 0.0:
            total -= p * math.log2(p)
    return total


def marginalize(d: JointDistribution, keep: SourceSet) -> JointDistribution:
    """Marginal distribution over ``keep``, other variables summed out.

    The kept variables appear in ascending original order and are renumbered
    1..len(keep) in the result.
    """
    _check_source(d, keep)
    idx = [v - 1 for v in keep.variables]
    out: dict[Outcome, float] = {}
    for outcome in d.support():
        sub = tuple(outcome[i] for i in idx)
        out[sub] = out.get(sub, 0.0) + d.pmf[outcome]
    sizes = tuple(d.alphabet_sizes[i] for i in idx)
    return JointDistribution(len(idx), sizes, out)


def project_to_sources(
    d: JointDistribution, sources: Sequence[SourceSet]
) -> SourceTupleDistribution:
    """Deterministic projection of each outcome onto a tuple of source values.

    Colliding tuples have their probabilities summed; tuples whose overlapping
    sources disagree are never produced and so carry exactly zero mass.
    """
    if not sources:
        raise InvalidSourceError("need at least one source")
    for s in sources:
        _check_source(d, s)
    index_lists = [[v - 1 for v in s.variables] for s in sources]
    out: dict[tuple[SourceValue, ...], float] = {}
    for outcome in d.support():
        t = tuple(tuple(outcome[i] for i in idx) for idx in index_lists)
        out[t] = out.get(t, 0.0) + d.pmf[outcome]
    return SourceTupleDistribution(tuple(sources), out)


def surprisal(d: JointDistribution, outcome: Outcome) -> float:
    """``-log2 p(outcome)``; undefined (an error) on zero-probability points."""
    p = d.p(outcome)
    if p <= 0.0:
        raise UndefinedSurprisalError(
            f"surprisal undefined for zero-probability outcome {tuple(outcome)}"
        )
    return -math.log2(p)


def entropy(d: JointDistribution) -> float:
    """Shannon entropy of the joint pmf, in bits."""
    return pmf_entropy(d.pmf[o] for o in d.support())


def mutual_information(d: JointDistribution, a: SourceSet, b: SourceSet) -> float:
    """``I(a;b) = H(a) + H(b) - H(a,b)`` in bits; a and b must be disjoint.

    Tiny negative rounding residue (within 1e-12) is clamped to zero.
    """
    if not a.isdisjoint(b):
        raise InvalidSourceError(f"sources {a} and {b} overlap")
    _check_source(d, a)
    _check_source(d, b)
    value = (
        entropy(marginalize(d, a))
        + entropy(marginalize(d, b))
        - entropy(marginalize(d, a.union(b)))
    )
    if -1e-12 < value < 0.0:
        return 0.0
    return value


def local_coinformation(
    std: SourceTupleDistribution, values: tuple[SourceValue, ...]
) -> float:
    """Local co-information at one source-value tuple, in bits.

    Alternating-sign sum of the surprisals of all nonempty sub-tuples, with
    marginals taken from ``std``. For two sources this is the local mutual
    information. Defined only where ``p(values) > 0``.
    """
    values = tuple(values)
    k = len(std.sources)
    if len(values) != k:
        raise InvalidDistributionError(f"tuple {values} has wrong arity")
    if std.p(values) <= 0.0:
        raise UndefinedSurprisalError(
            f"local co-information undefined for zero-probability tuple {values}"
        )
    total = 0.0
    for size in range(1, k + 1):
        sign = 1.0 if size % 2 == 1 else -1.0
        for pos in itertools.combinations(range(k), size):
            p = std.submarginal(pos).get(tuple(values[i] for i in pos), 0.0)
            if p <= 0.0:
                raise UndefinedSurprisalError(
                    f"zero sub-marginal at positions {pos} of {values}"
                )
            total += sign * -math.log2(p)
    return total


# ---------------------------------------------------------------------------
# Distribution text format
#
#   # vars=<n> alphabet=<k1> <k2> ...     (optional header)
#   <symbol_1> ... <symbol_n> <probability>
#
# '#'-prefixed lines are comments; the header is recognized only before the
# first record. Duplicate outcome rows are an error.
# ---------------------------------------------------------------------------

_HEADER_RE = re.compile(r"^#\s*vars=(\d+)\s+alphabet=((?:\d+\s*)+)$")


def parse_distribution_text(text: str) -> JointDistribution:
    """Parse the distribution text format; errors carry line numbers."""
    n_vars: int | None = None
    sizes: tuple[int, ...] | None = None
    rows: dict[Outcome, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m and not rows and n_vars is None:
                n_vars = int(m.group(1))
                sizes = tuple(int(tok) for tok in m.group(2).split())
                if len(sizes) != n_vars:
                    raise DistributionFormatError(
                        f"header declares vars={n_vars} but {len(sizes)} alphabet sizes",
                        line=lineno,
                    )
            continue
        toks = line.split()
        if n_vars is None:
            if len(toks) < 2:
                raise DistributionFormatError(
                    "record needs at least one symbol and a probability", line=lineno
                )
            n_vars = len(toks) - 1
        if len(toks) != n_vars + 1:
            raise DistributionFormatError(
                f"expected {n_vars} symbols and a probability, got {len(toks)} fields",
                line=lineno,
            )
        try:
            outcome = tuple(int(tok) for tok in toks[:-1])
        except ValueError:
            raise DistributionFormatError(
                f"symbols must be integers: {line!r}", line=lineno
            ) from None
        try:
            prob = float(toks[-1])
        except ValueError:
            raise DistributionFormatError(
                f"bad probability literal {toks[-1]!r}", line=lineno
            ) from None
        if not math.isfinite(prob):
            raise DistributionFormatError(
                f"probability must be finite, got {toks[-1]!r}", line=lineno
            )
        if prob < 0.0:
            raise DistributionFormatError(
                f"negative probability {toks[-1]}", line=lineno
            )
        if any(x < 0 for x in outcome):
            raise DistributionFormatError(
                f"symbols are 0-based non-negative integers: {outcome}", line=lineno
            )
        if sizes is not None:
            for x, k in zip(outcome, sizes):
                if x >= k:
                    raise DistributionFormatError(
                        f"symbol {x} outside declared alphabet of size {k}", line=lineno
                    )
        if outcome in rows:
            raise DistributionFormatError(
                f"duplicate outcome row {outcome}", line=lineno
            )
        rows[outcome] = prob
    if not rows:
        raise DistributionFormatError("no outcome records found")
    total = sum(rows.values())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise DistributionFormatError(f"probabilities sum to {total!r}, not 1")
    if sizes is None:
        assert n_vars is not None
        sizes = tuple(max(o[i] for o in rows) + 1 for i in range(n_vars))
    return JointDistribution(n_vars, sizes, rows)


def format_distribution_text(d: JointDistribution, header: bool = True) -> str:
    """Serialize a distribution (support only) in the text format."""
    lines = []
    if header:
        lines.append(
            f"# vars={d.n_vars} alphabet=" + " ".join(str(k) for k in d.alphabet_sizes)
        )
    for outcome in d.support():
        symbols = " ".join(str(x) for x in outcome)
        lines.append(f"{symbols} {d.pmf[outcome]:.17g}")
    return "\n".join(lines) + "\n"


def load_distribution_file(path) -> JointDistribution:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_distribution_text(fh.read())
