"""Common-surprisal redundancy: shared entropy across a set of sources.

The measure is the expectation of the clamped local co-information,
``sum_t p(t) * max(c(t), 0)``. For one source this is the source entropy
(self-redundancy); for two it sums the positive local mutual information
terms; for three the expectation and the local terms are both taken under the
pairwise maximum-entropy projection of the source-tuple distribution.

The clamp is applied after computing the local co-information in full double
precision; there is no epsilon band at zero. Zero-probability tuples are
never evaluated. Summation runs over the canonically sorted support, so
results are deterministic regardless of evaluation order elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .dist import (
    JointDistribution,
    SourceSet,
    SourceValue,
    local_coinformation,
    project_to_sources,
)
from .errors import InvalidSourceError
from .lattice import LatticeNode, _canonical_key
from .maxent import IPF_MAX_CYCLES, IPF_TOL, IpfReport, pairwise_maxent

MAX_SOURCES = 3


class PointwiseTerm(NamedTuple):
    values: tuple[SourceValue, ...]
    weight: float
    coinformation: float
    contribution: float


@dataclass(frozen=True)
class RedundancyEvaluation:
    """Value of the redundancy measure at one lattice node.

    ``pointwise_terms`` is retained only when tracing is requested; the
    contributions re-sum to ``value``.
    """

    node: LatticeNode
    value: float
    used_maxent: bool
    pointwise_terms: tuple[PointwiseTerm, ...] | None = None
    ipf_report: IpfReport | None = None


def canonicalize_sources(sources: Sequence[SourceSet]) -> list[SourceSet]:
    """Drop duplicate sources and any source containing another; sort.

    By subset equality the redundancy of the reduced list equals that of the
    original.
    """
    if not sources:
        raise InvalidSourceError("need at least one source")
    unique = list(dict.fromkeys(sources))
    kept = [
        s
        for s in unique
        if not any(t != s and t.issubset(s) for t in unique)
    ]
    return sorted(kept, key=_canonical_key)


def _as_sources(node) -> tuple[SourceSet, ...]:
    if isinstance(node, LatticeNode):
        return node.sources
    return tuple(s if isinstance(s, SourceSet) else SourceSet.of(*s) for s in node)


def h_cs(
    d: JointDistribution,
    node,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
    trace: bool = False,
) -> RedundancyEvaluation:
    """Common-surprisal redundancy of a lattice node (or raw source list).

    A raw source list is evaluated in the order given; the value is invariant
    under permutation of the sources. Nodes with four or more sources are
    rejected: the choice of marginal constraint order beyond pairwise is
    unsettled, so no value is defined here.
    """
    sources = _as_sources(node)
    k = len(sources)
    if k > MAX_SOURCES:
        raise InvalidSourceError(
            f"redundancy is defined here for at most {MAX_SOURCES} sources, got {k}"
        )
    std = project_to_sources(d, sources)
    report = None
    if k >= 3:
        q, report = pairwise_maxent(std, tol=ipf_tol, max_cycles=ipf_max_cycles)
    else:
        q = std
    value = 0.0
    terms: list[PointwiseTerm] | None = [] if trace else None
    for t in q.support():
        weight = q.pmf[t]
        c = local_coinformation(q, t)
        contribution = weight * max(c, 0.0)
        value += contribution
        if terms is not None:
            terms.append(PointwiseTerm(t, weight, c, contribution))
    return RedundancyEvaluation(
        node=LatticeNode(tuple(canonicalize_sources(sources))),
        value=value,
        used_maxent=k >= 3,
        pointwise_terms=tuple(terms) if terms is not None else None,
        ipf_report=report,
    )


def positive_negative_split(
    d: JointDistribution, a: SourceSet, b: SourceSet
) -> tuple[float, float]:
    """Split I(a;b) into its positive and misinformation parts.

    Returns ``(pos, neg)`` with ``pos = sum p*max(i, 0)`` and
    ``neg = sum p*max(-i, 0)`` over local mutual information ``i``;
    ``pos - neg`` equals the mutual information.
    """
    if not a.isdisjoint(b):
        raise InvalidSourceError(f"sources {a} and {b} overlap")
    std = project_to_sources(d, [a, b])
    pos = 0.0
    neg = 0.0
    for t in std.support():
        p = std.pmf[t]
        i = local_coinformation(std, t)
        if i >= 0.0:
            pos += p * i
        else:
            neg -= p * i
    return pos, neg
