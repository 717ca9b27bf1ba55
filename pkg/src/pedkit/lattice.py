"""The antichain redundancy lattice and Möbius inversion over it.

For ``n`` variables the nodes are the nonempty antichains of nonempty subsets
("sources") of ``{1..n}``: collections of sources in which no source contains
another. The partial order is ``alpha <= beta`` iff every source in ``beta``
has a subset source in ``alpha``; lower nodes carry more widely shared
content. Node counts are 4, 18 and 166 for n = 2, 3, 4.

Node names follow the grammar ``node := group+ ; group := '{' digit+ '}'``
with variable indices ascending inside a group and groups in canonical order
(by size, then lexicographically), e.g. ``{3}{12}``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .dist import SourceSet
from .errors import LatticeError

MIN_VARS = 2
MAX_VARS = 4


def _canonical_key(source: SourceSet) -> tuple[int, tuple[int, ...]]:
    return (len(source.variables), source.variables)


@dataclass(frozen=True)
class LatticeNode:
    """An antichain of sources in canonical order; one atom of a decomposition."""

    sources: tuple[SourceSet, ...]

    def __post_init__(self):
        if not self.sources:
            raise LatticeError("a lattice node needs at least one source")
        keys = [_canonical_key(s) for s in self.sources]
        if keys != sorted(keys):
            raise LatticeError(
                f"sources must be in canonical order (size, then lexicographic): {self}"
            )
        for a, b in itertools.combinations(self.sources, 2):
            if a.issubset(b) or b.issubset(a):
                raise LatticeError(f"not an antichain: {a} and {b} are nested")

    @classmethod
    def of(cls, *sources) -> "LatticeNode":
        """Node from sources given as iterables of variable indices."""
        ss = [s if isinstance(s, SourceSet) else SourceSet.of(*s) for s in sources]
        return cls(tuple(sorted(ss, key=_canonical_key)))

    @property
    def name(self) -> str:
        return "".join(s.name for s in self.sources)

    @property
    def max_variable(self) -> int:
        return max(s.variables[-1] for s in self.sources)

    def order_signature(self) -> tuple[int, ...]:
        """Sorted tuple of source sizes, e.g. (1, 2) for ``{1}{23}``."""
        return tuple(sorted(len(s.variables) for s in self.sources))

    def __str__(self) -> str:
        return self.name


_NODE_RE = re.compile(r"^(\{\d+\})+$")


def parse_node(text: str) -> LatticeNode:
    """Parse a canonical node name such as ``{1}{23}`` (bit-exact grammar)."""
    if not _NODE_RE.match(text):
        raise LatticeError(f"bad node name {text!r}")
    sources = []
    for group in re.findall(r"\{(\d+)\}", text):
        variables = tuple(int(ch) for ch in group)
        if list(variables) != sorted(set(variables)):
            raise LatticeError(
                f"variables inside a group must be ascending and unique: {{{group}}}"
            )
        sources.append(SourceSet(variables))
    node = LatticeNode(tuple(sources))
    if node.name != text:
        raise LatticeError(f"{text!r} is not in canonical order; use {node.name!r}")
    return node


def node_leq(alpha: LatticeNode, beta: LatticeNode) -> bool:
    """True iff ``alpha`` is below-or-equal ``beta``: every source of ``beta``
    has a subset source in ``alpha``."""
    return all(any(a.issubset(b) for a in alpha.sources) for b in beta.sources)


def _enumerate_sources(n_vars: int) -> list[SourceSet]:
    sources = []
    for size in range(1, n_vars + 1):
        for combo in itertools.combinations(range(1, n_vars + 1), size):
            sources.append(SourceSet(combo))
    return sorted(sources, key=_canonical_key)


class LatticeStructure:
    """Nodes, order relation, strict down-sets, covers and levels for one n.

    Immutable after construction; shared via :func:`lattice_structure`.
    """

    def __init__(self, n_vars: int):
        if not MIN_VARS <= n_vars <= MAX_VARS:
            raise LatticeError(
                f"supported variable counts are {MIN_VARS}..{MAX_VARS}, got {n_vars}"
            )
        self.n_vars = n_vars
        sources = _enumerate_sources(n_vars)
        # An antichain of subsets of an n-set has at most C(n, n//2) members.
        max_size = math.comb(n_vars, n_vars // 2)
        raw: list[LatticeNode] = []
        for size in range(1, max_size + 1):
            for family in itertools.combinations(sources, size):
                if all(
                    not a.issubset(b) and not b.issubset(a)
                    for a, b in itertools.combinations(family, 2)
                ):
                    raw.append(LatticeNode(tuple(family)))
        below: dict[LatticeNode, list[LatticeNode]] = {
            node: [m for m in raw if m != node and node_leq(m, node)] for node in raw
        }
        levels: dict[LatticeNode, int] = {}
        for node in sorted(raw, key=lambda m: len(below[m])):
            levels[node] = 1 + max((levels[m] for m in below[node]), default=-1)
        self.nodes: tuple[LatticeNode, ...] = tuple(
            sorted(raw, key=lambda m: (levels[m], m.name))
        )
        self.level: dict[LatticeNode, int] = levels
        order = {node: i for i, node in enumerate(self.nodes)}
        self.strict_down: dict[LatticeNode, tuple[LatticeNode, ...]] = {
            node: tuple(sorted(below[node], key=order.__getitem__)) for node in self.nodes
        }
        self.bottom: LatticeNode = self.nodes[0]
        self.top: LatticeNode = self.nodes[-1]
        self._by_name = {node.name: node for node in self.nodes}

    def node(self, name: str) -> LatticeNode:
        try:
            return self._by_name[name]
        except KeyError:
            raise LatticeError(
                f"no node {name!r} in the {self.n_vars}-variable lattice"
            ) from None

    def covers(self, node: LatticeNode) -> tuple[LatticeNode, ...]:
        """Immediate successors of ``node`` (minimal strictly-above nodes)."""
        above = [m for m in self.nodes if m != node and node_leq(node, m)]
        return tuple(
            m for m in above
            if not any(k != m and node_leq(k, m) for k in above)
        )


@lru_cache(maxsize=None)
def lattice_structure(n_vars: int) -> LatticeStructure:
    return LatticeStructure(n_vars)


def enumerate_nodes(n_vars: int) -> list[LatticeNode]:
    """All lattice nodes for ``n_vars`` in display order (level, then name)."""
    return list(lattice_structure(n_vars).nodes)


def _infer_structure(redundancy: Mapping[LatticeNode, float]) -> LatticeStructure:
    if not redundancy:
        raise LatticeError("empty node-value mapping")
    n_vars = max(node.max_variable for node in redundancy)
    structure = lattice_structure(n_vars)
    missing = [node.name for node in structure.nodes if node not in redundancy]
    if missing:
        raise LatticeError(f"missing node values: {', '.join(missing)}")
    extra = [node.name for node in redundancy if node not in structure.strict_down]
    if extra:
        raise LatticeError(f"unknown nodes for n_vars={n_vars}: {', '.join(extra)}")
    return structure


def moebius_invert(
    redundancy: Mapping[LatticeNode, float]
) -> dict[LatticeNode, float]:
    """Partial values from node redundancies, bottom-up over the lattice.

    Solves ``partial(a) = redundancy(a) - sum(partial(b) for b strictly below
    a)``; re-summing partials over each down-set reproduces every input
    redundancy. Summation order is fixed for bit-reproducibility.
    """
    structure = _infer_structure(redundancy)
    partial: dict[LatticeNode, float] = {}
    for node in structure.nodes:
        acc = redundancy[node]
        for below in structure.strict_down[node]:
            acc -= partial[below]
        partial[node] = acc
    return partial


def downset_sums(partial: Mapping[LatticeNode, float]) -> dict[LatticeNode, float]:
    """Inverse of :func:`moebius_invert`: down-set sums of partial values."""
    structure = _infer_structure(partial)
    out: dict[LatticeNode, float] = {}
    for node in structure.nodes:
        acc = partial[node]
        for below in structure.strict_down[node]:
            acc += partial[below]
        out[node] = acc
    return out


@dataclass(frozen=True)
class EntropyLattice:
    """A redundancy lattice with its per-node redundancy and partial values."""

    n_vars: int
    nodes: tuple[LatticeNode, ...]
    redundancy: Mapping[LatticeNode, float]
    partial: Mapping[LatticeNode, float]

    @property
    def structure(self) -> LatticeStructure:
        return lattice_structure(self.n_vars)

    def node(self, name: str) -> LatticeNode:
        return self.structure.node(name)

    def partial_by_name(self, name: str) -> float:
        return self.partial[self.node(name)]

    def redundancy_by_name(self, name: str) -> float:
        return self.redundancy[self.node(name)]
