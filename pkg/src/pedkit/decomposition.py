"""Assemble full partial entropy decompositions and everything derived from
them: cross-lattice consistency checks, the two mutual-information
decompositions, the mechanistic/source redundancy split, and pure mutual
information.

Information decompositions for an arbitrary target are computed by permuting
the variables so the target occupies position 3 and applying one fixed
formula set; ``unique_1``/``unique_2`` then refer to the two predictors in
ascending original index order.

Check operations return diagnostics (name, lhs, rhs, |difference|) rather
than asserting; callers decide what tolerance to hold them to.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .dist import (
    JointDistribution,
    SourceSet,
    entropy,
    marginalize,
    mutual_information,
    project_to_sources,
)
from .errors import InvalidSourceError, LatticeError
from .lattice import (
    EntropyLattice,
    LatticeNode,
    lattice_structure,
    moebius_invert,
    parse_node,
)
from .maxent import IPF_MAX_CYCLES, IPF_TOL
from .redundancy import RedundancyEvaluation, h_cs

FULL_PED = "full_ped"
MONO_PED = "mono_ped"
PURE_MI = "pure_mi"

ATOM_NAMES = ("redundant", "unique_1", "unique_2", "synergy")

#: Order signatures of the 18-node lattice, in reporting order.
ORDER_SIGNATURES = (
    (1, 1, 1),
    (1, 1),
    (1, 2),
    (1,),
    (2, 2, 2),
    (2, 2),
    (2,),
    (3,),
)


class CheckRow(NamedTuple):
    name: str
    lhs: float
    rhs: float
    diff: float


def _row(name: str, lhs: float, rhs: float) -> CheckRow:
    return CheckRow(name, lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class PedResult:
    """A filled entropy lattice for one system."""

    lattice: EntropyLattice
    system_label: str = ""
    evaluations: Mapping[LatticeNode, RedundancyEvaluation] = field(
        default_factory=dict, repr=False
    )

    def partial(self, name: str) -> float:
        return self.lattice.partial_by_name(name)

    def redundancy(self, name: str) -> float:
        return self.lattice.redundancy_by_name(name)

    @property
    def total_partial(self) -> float:
        return sum(self.lattice.partial[n] for n in self.lattice.nodes)


@dataclass(frozen=True)
class PidResult:
    """Four-atom information decomposition about one target variable.

    ``redundancy_split`` is ``(source, mechanistic)`` and sums to the
    redundant atom.
    """

    method: str
    target: int
    atoms: Mapping[str, float]
    redundancy_split: tuple[float, float]

    def atom_tuple(self) -> tuple[float, float, float, float]:
        """Atoms in lattice-table order: synergy, unique_1, unique_2, redundant."""
        a = self.atoms
        return (a["synergy"], a["unique_1"], a["unique_2"], a["redundant"])


@dataclass(frozen=True)
class OrderSummary:
    """The 18-node decomposition condensed by source-size signature."""

    values: Mapping[tuple[int, ...], float]

    def as_list(self) -> list[float]:
        return [self.values[sig] for sig in ORDER_SIGNATURES]


# ---------------------------------------------------------------------------
# Variable rearrangement helpers
# ---------------------------------------------------------------------------


def permute_variables(
    d: JointDistribution, order: Sequence[int]
) -> JointDistribution:
    """Relabel variables so new position ``i`` holds original ``order[i-1]``."""
    if sorted(order) != list(range(1, d.n_vars + 1)):
        raise InvalidSourceError(
            f"order {tuple(order)} is not a permutation of 1..{d.n_vars}"
        )
    idx = [v - 1 for v in order]
    pmf = {}
    for outcome in d.support():
        pmf[tuple(outcome[i] for i in idx)] = d.pmf[outcome]
    sizes = tuple(d.alphabet_sizes[i] for i in idx)
    return JointDistribution(d.n_vars, sizes, pmf)


def merge_variables(
    d: JointDistribution, blocks: Sequence[SourceSet]
) -> JointDistribution:
    """Merge each disjoint block of variables into one composite variable.

    Variables outside the blocks are marginalized out. Block values are
    relabeled to consecutive symbols in sorted value order, which is a
    bijection on the observed support.
    """
    for a, b in itertools.combinations(blocks, 2):
        if not a.isdisjoint(b):
            raise InvalidSourceError(f"blocks {a} and {b} overlap")
    std = project_to_sources(d, blocks)
    value_maps = []
    for i in range(len(blocks)):
        values = std.position_values(i)
        value_maps.append({v: s for s, v in enumerate(values)})
    pmf = {}
    for t in std.support():
        key = tuple(value_maps[i][t[i]] for i in range(len(blocks)))
        pmf[key] = pmf.get(key, 0.0) + std.pmf[t]
    sizes = tuple(len(m) for m in value_maps)
    return JointDistribution(len(blocks), sizes, pmf)


def with_copy_target(d: JointDistribution) -> JointDistribution:
    """Extend a 2-variable system with an explicit copy ``X3 = (X1, X2)``."""
    if d.n_vars != 2:
        raise InvalidSourceError("copy-target construction needs a 2-variable system")
    k2 = d.alphabet_sizes[1]
    pmf = {}
    for (x1, x2) in d.support():
        pmf[(x1, x2, x1 * k2 + x2)] = d.pmf[(x1, x2)]
    sizes = (d.alphabet_sizes[0], k2, d.alphabet_sizes[0] * k2)
    return JointDistribution(3, sizes, pmf)


# ---------------------------------------------------------------------------
# The decomposition itself
# ---------------------------------------------------------------------------


def compute_ped(
    d: JointDistribution,
    *,
    system_label: str = "",
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
    trace: bool = False,
) -> PedResult:
    """Evaluate the redundancy of every lattice node and invert to atoms."""
    if not 2 <= d.n_vars <= 3:
        raise LatticeError(
            f"entropy decompositions are computed for 2 or 3 variables, got {d.n_vars}"
        )
    structure = lattice_structure(d.n_vars)
    evaluations: dict[LatticeNode, RedundancyEvaluation] = {}
    redundancy: dict[LatticeNode, float] = {}
    for node in structure.nodes:
        ev = h_cs(d, node, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles, trace=trace)
        evaluations[node] = ev
        redundancy[node] = ev.value
    partial = moebius_invert(redundancy)
    lattice = EntropyLattice(
        n_vars=d.n_vars,
        nodes=structure.nodes,
        redundancy=redundancy,
        partial=partial,
    )
    return PedResult(lattice=lattice, system_label=system_label, evaluations=evaluations)


def order_summary(ped: PedResult) -> OrderSummary:
    """Sum atoms by source-size signature; 8 entries for 3 variables."""
    if ped.lattice.n_vars != 3:
        raise LatticeError("order summary is defined for 3-variable decompositions")
    sums = {sig: 0.0 for sig in ORDER_SIGNATURES}
    for node in ped.lattice.nodes:
        sums[node.order_signature()] += ped.lattice.partial[node]
    return OrderSummary(sums)


# Formula node sets over the 3-variable lattice with the target at position 3.
_FULL_FORMULAS = {
    "redundant": (["{1}{2}{3}"], ["{13}{23}", "{12}{13}{23}"]),
    "unique_1": (["{1}{3}"], ["{13}", "{12}{13}", "{2}{13}"]),
    "unique_2": (["{2}{3}"], ["{23}", "{12}{23}", "{1}{23}"]),
    "synergy": (
        ["{3}{12}", "{12}{13}", "{12}{23}", "{12}{13}{23}", "{1}{23}", "{2}{13}"],
        ["{123}"],
    ),
}

_MONO_FORMULAS = {
    "redundant": (["{1}{2}{3}"], ["{13}{23}"]),
    "unique_1": (["{1}{3}"], ["{13}"]),
    "unique_2": (["{2}{3}"], ["{23}"]),
    "synergy": (["{3}{12}"], ["{123}"]),
}

_PURE_FORMULAS = {
    "redundant": (["{1}{2}{3}"], []),
    "unique_1": (["{1}{3}"], []),
    "unique_2": (["{2}{3}"], []),
    "synergy": (["{3}{12}"], []),
}

_METHOD_FORMULAS = {
    FULL_PED: _FULL_FORMULAS,
    MONO_PED: _MONO_FORMULAS,
    PURE_MI: _PURE_FORMULAS,
}


def _eval_formula(ped: PedResult, plus: list[str], minus: list[str]) -> float:
    return sum(ped.partial(n) for n in plus) - sum(ped.partial(n) for n in minus)


def _split_from_partials(ped: PedResult, method: str) -> tuple[float, float]:
    """(source, mechanistic) parts of the redundant atom, target at position 3.

    Mechanistic redundancy is the negative part of the predictors' pairwise
    atom; the remaining three-way redundancy is source redundancy. The
    synergistic-pair atoms subtracted from the redundant atom sit above the
    predictor pair on the lattice, so they are charged to the mechanistic
    part.
    """
    mech3 = abs(min(ped.partial("{1}{2}"), 0.0))
    source = ped.partial("{1}{2}{3}") - mech3
    if method == FULL_PED:
        mech = mech3 - ped.partial("{13}{23}") - ped.partial("{12}{13}{23}")
    elif method == MONO_PED:
        mech = mech3 - ped.partial("{13}{23}")
    elif method == PURE_MI:
        mech = mech3
    else:
        raise ValueError(f"unknown method {method!r}")
    return source, mech


def _target_permutation(target: int) -> tuple[int, int, int]:
    if target not in (1, 2, 3):
        raise InvalidSourceError(f"target must be 1, 2 or 3, got {target}")
    others = tuple(v for v in (1, 2, 3) if v != target)
    return others + (target,)


def _target_ped(
    d: JointDistribution, target: int, ipf_tol: float, ipf_max_cycles: int
) -> PedResult:
    if d.n_vars != 3:
        raise LatticeError("information decompositions need a 3-variable system")
    dp = permute_variables(d, _target_permutation(target))
    return compute_ped(dp, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)


def _pid(
    d: JointDistribution,
    target: int,
    method: str,
    ipf_tol: float,
    ipf_max_cycles: int,
) -> PidResult:
    ped = _target_ped(d, target, ipf_tol, ipf_max_cycles)
    formulas = _METHOD_FORMULAS[method]
    atoms = {
        name: _eval_formula(ped, plus, minus)
        for name, (plus, minus) in formulas.items()
    }
    split = _split_from_partials(ped, method)
    return PidResult(method=method, target=target, atoms=atoms, redundancy_split=split)


def pid_full(
    d: JointDistribution,
    target: int,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> PidResult:
    """Information decomposition keeping every partial-entropy term.

    Satisfies both the joint reconstruction and the per-predictor identity
    ``redundant + unique_i = I(X_i; target)``.
    """
    return _pid(d, target, FULL_PED, ipf_tol, ipf_max_cycles)


def pid_mono(
    d: JointDistribution,
    target: int,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> PidResult:
    """Monosemous decomposition: only unambiguous partial-entropy terms.

    Satisfies the joint reconstruction; the per-predictor identity does not
    hold in general.
    """
    return _pid(d, target, MONO_PED, ipf_tol, ipf_max_cycles)


def mech_source_split(
    d: JointDistribution,
    target: int,
    method: str = FULL_PED,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> tuple[float, float]:
    """(source, mechanistic) split of the redundant atom for one method."""
    if method not in _METHOD_FORMULAS:
        raise ValueError(f"unknown method {method!r}")
    ped = _target_ped(d, target, ipf_tol, ipf_max_cycles)
    return _split_from_partials(ped, method)


# ---------------------------------------------------------------------------
# Cross-lattice identity checks
# ---------------------------------------------------------------------------

#: 2-variable marginal atom -> contributing 3-variable atoms, after the
#: dropped variable has been permuted to position 3.
_MARGINALIZATION_RELATIONS = (
    ("{12}", ["{12}", "{3}{12}", "{12}{13}", "{12}{23}", "{12}{13}{23}"]),
    ("{1}", ["{1}", "{1}{23}", "{1}{3}"]),
    ("{2}", ["{2}", "{2}{13}", "{2}{3}"]),
    ("{1}{2}", ["{1}{2}", "{1}{2}{3}"]),
)

#: Combined-pair atom (variables 1,2 merged) -> contributing 3-variable atoms.
_COMBINATION_RELATIONS = (
    ("{123}", "{12}", ["{123}", "{13}", "{23}", "{13}{23}"]),
    (
        "{12}",
        "{1}",
        [
            "{12}",
            "{12}{13}",
            "{12}{23}",
            "{1}",
            "{2}",
            "{12}{13}{23}",
            "{1}{23}",
            "{2}{13}",
            "{1}{2}",
        ],
    ),
    ("{3}", "{2}", ["{3}"]),
    ("{12}{3}", "{1}{2}", ["{3}{12}", "{1}{3}", "{2}{3}", "{1}{2}{3}"]),
)


def marginalization_check(
    d: JointDistribution,
    drop: int,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> list[CheckRow]:
    """Compare the marginal pair decomposition against sums of 3-variable atoms.

    Each atom of the 2-variable decomposition obtained by summing out
    ``drop`` must equal the sum of the 3-variable atoms whose nodes mention
    the same sources.
    """
    if d.n_vars != 3:
        raise LatticeError("marginalization check needs a 3-variable system")
    keep = tuple(v for v in (1, 2, 3) if v != drop)
    dp = permute_variables(d, keep + (drop,))
    ped3 = compute_ped(dp, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    d2 = marginalize(d, SourceSet(keep))
    ped2 = compute_ped(d2, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    rows = []
    for name2, names3 in _MARGINALIZATION_RELATIONS:
        lhs = ped2.partial(name2)
        rhs = sum(ped3.partial(n) for n in names3)
        rows.append(_row(f"marginal {name2}", lhs, rhs))
    return rows


def combination_check(
    d: JointDistribution,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> list[CheckRow]:
    """Compare the pair decomposition of ((X1,X2), X3) against atom sums."""
    if d.n_vars != 3:
        raise LatticeError("combination check needs a 3-variable system")
    dm = merge_variables(d, [SourceSet.of(1, 2), SourceSet.of(3)])
    ped2 = compute_ped(dm, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    ped3 = compute_ped(d, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    rows = []
    for label, name2, names3 in _COMBINATION_RELATIONS:
        lhs = ped2.partial(name2)
        rhs = sum(ped3.partial(n) for n in names3)
        rows.append(_row(f"combined {label}", lhs, rhs))
    return rows


#: The four mutual-information identities, target at position 3:
#: name, direct quantity, (plus atoms, minus atoms).
_MI_IDENTITY_FORMULAS = (
    (
        "I(X1;X3)",
        (
            ["{1}{3}", "{1}{2}{3}"],
            ["{13}", "{12}{13}", "{13}{23}", "{2}{13}", "{12}{13}{23}"],
        ),
    ),
    (
        "I(X2;X3)",
        (
            ["{2}{3}", "{1}{2}{3}"],
            ["{23}", "{12}{23}", "{13}{23}", "{1}{23}", "{12}{13}{23}"],
        ),
    ),
    (
        "I(X1,X2;X3)",
        (
            ["{3}{12}", "{1}{3}", "{2}{3}", "{1}{2}{3}"],
            ["{123}", "{13}", "{23}", "{13}{23}"],
        ),
    ),
    (
        "I(X1;X3|X2)",
        (
            ["{3}{12}", "{1}{3}", "{12}{23}", "{1}{23}", "{12}{13}{23}"],
            ["{123}", "{13}"],
        ),
    ),
)


def mi_identities(
    d: JointDistribution,
    target: int,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> list[CheckRow]:
    """Evaluate the four MI identities both directly and as atom sums.

    Variable labels in the row names refer to positions after the target has
    been permuted to position 3.
    """
    if d.n_vars != 3:
        raise LatticeError("MI identities need a 3-variable system")
    dp = permute_variables(d, _target_permutation(target))
    ped = compute_ped(dp, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    s1, s2, s3 = SourceSet.of(1), SourceSet.of(2), SourceSet.of(3)
    direct = {
        "I(X1;X3)": mutual_information(dp, s1, s3),
        "I(X2;X3)": mutual_information(dp, s2, s3),
        "I(X1,X2;X3)": mutual_information(dp, SourceSet.of(1, 2), s3),
        "I(X1;X3|X2)": (
            entropy(marginalize(dp, SourceSet.of(1, 2)))
            + entropy(marginalize(dp, SourceSet.of(2, 3)))
            - entropy(dp)
            - entropy(marginalize(dp, s2))
        ),
    }
    rows = []
    for name, (plus, minus) in _MI_IDENTITY_FORMULAS:
        rows.append(_row(name, direct[name], _eval_formula(ped, plus, minus)))
    return rows


# ---------------------------------------------------------------------------
# Pure mutual information
# ---------------------------------------------------------------------------


def pure_mi(
    d: JointDistribution,
    a: SourceSet,
    b: SourceSet,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> float:
    """Shared-entropy-only dependence between two disjoint variable blocks.

    The blocks are merged into single variables and the redundant atom of the
    resulting pair decomposition is returned. Non-negative, zero exactly for
    independent blocks, and never below the mutual information.
    """
    if not a.isdisjoint(b):
        raise InvalidSourceError(f"sources {a} and {b} overlap")
    dm = merge_variables(d, [a, b])
    ped = compute_ped(dm, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    return ped.partial("{1}{2}")


def pure_mi_pid(
    d: JointDistribution,
    target: int,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> PidResult:
    """Decomposition of pure mutual information about one target.

    The four atoms are single partial-entropy terms, so both the joint
    reconstruction and the per-predictor identity hold for pure MI.
    """
    return _pid(d, target, PURE_MI, ipf_tol, ipf_max_cycles)


def pure_mi_chain_check(
    d: JointDistribution,
    x: SourceSet,
    y: SourceSet,
    z: SourceSet,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> CheckRow:
    """Chain rule for pure MI: ``Ip(X;Y,Z) = Ip(X;Z) + Ip(X;Y|Z)``.

    The conditional term is read off the three-block decomposition as
    ``H_partial({1}{2}) + H_partial({1}{23})`` with blocks (X, Y, Z).
    """
    for s, t in itertools.combinations((x, y, z), 2):
        if not s.isdisjoint(t):
            raise InvalidSourceError(f"blocks {s} and {t} overlap")
    lhs = pure_mi(d, x, y.union(z), ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    base = pure_mi(d, x, z, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    blocks = merge_variables(d, [x, y, z])
    pedb = compute_ped(blocks, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    conditional = pedb.partial("{1}{2}") + pedb.partial("{1}{23}")
    return _row("pure-MI chain rule", lhs, base + conditional)


# ---------------------------------------------------------------------------
# Identity-axiom check on copy systems
# ---------------------------------------------------------------------------


def identity_axiom_check(
    d12: JointDistribution,
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> list[CheckRow]:
    """Verify the copy-target identities on ``X3 = (X1, X2)``.

    The three-way redundant atom must equal the pair redundancy of the
    inputs, and the atoms above the copy node must vanish.
    """
    if d12.n_vars != 2:
        raise LatticeError("identity-axiom check needs a 2-variable system")
    d3 = with_copy_target(d12)
    ped3 = compute_ped(d3, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    pair_red = h_cs(d12, parse_node("{1}{2}")).value
    return [
        _row("H_partial({1}{2}{3}) = H_cap({1}{2})", ped3.partial("{1}{2}{3}"), pair_red),
        _row("H_partial({13}{23}) = 0", ped3.partial("{13}{23}"), 0.0),
        _row("H_partial({12}{13}{23}) = 0", ped3.partial("{12}{13}{23}"), 0.0),
    ]
