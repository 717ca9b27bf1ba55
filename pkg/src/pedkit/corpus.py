"""Built-in example systems and parametric families, with golden values.

The fixed systems are the standard small benchmarks of the information
decomposition literature (logic gates, the dyadic/triadic pair of James &
Crutchfield 2016, the Williams & Beer 2010 figure-4 systems, ImperfectRdn and
RdnXor from Griffith et al.). Golden maps hold two-decimal reference values
for the regression tests; `ped`/`hcs` goldens list the nonzero entries,
everything else is expected to vanish.

Parametric families modulate the dependence between two uniform input bits:

    P(X1=0,X2=0) = P(X1=1,X2=1) = 0.25 + c
    P(X1=0,X2=1) = P(X1=1,X2=0) = 0.25 - c      for c in [0, 0.25].

``corr_pair`` is the bare pair, ``copy_mech`` adds the output X3 = X1, and
``and_mech`` adds X3 = X1 AND X2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .decomposition import compute_ped, pid_mono
from .dist import JointDistribution, SourceSet, entropy, mutual_information
from .errors import PedkitError
from .maxent import IPF_MAX_CYCLES, IPF_TOL


class UnknownExampleError(PedkitError, KeyError):
    """No generator registered under the requested name."""


@dataclass(frozen=True)
class ExampleSpec:
    """A generated system plus any golden reference values."""

    name: str
    params: Mapping[str, float]
    distribution: JointDistribution
    golden: Mapping[str, Mapping[str, float]] | None = None
    note: str = ""


def _uniform(outcomes: Sequence[tuple[int, ...]], sizes) -> JointDistribution:
    p = 1.0 / len(outcomes)
    return JointDistribution(len(sizes), tuple(sizes), {o: p for o in outcomes})


def _pid_golden(full, mono) -> dict[str, dict[str, float]]:
    """full/mono given as (synergy, unique_1, unique_2, redundant, source, mech)."""
    keys = ("synergy", "unique_1", "unique_2", "redundant", "source", "mechanistic")
    return {
        "pid_full": dict(zip(keys, full)),
        "pid_mono": dict(zip(keys, mono)),
    }


def _xor() -> JointDistribution:
    return _uniform([(a, b, a ^ b) for a, b in product((0, 1), repeat=2)], (2, 2, 2))


def _and() -> JointDistribution:
    return _uniform([(a, b, a & b) for a, b in product((0, 1), repeat=2)], (2, 2, 2))


def _or() -> JointDistribution:
    return _uniform([(a, b, a | b) for a, b in product((0, 1), repeat=2)], (2, 2, 2))


def _sum() -> JointDistribution:
    return _uniform([(a, b, a + b) for a, b in product((0, 1), repeat=2)], (2, 2, 3))


def _dyadic() -> JointDistribution:
    # Three 2-bit variables, one bit shared between each pair:
    # X = (r, p), Y = (p, q), Z = (q, r); symbols packed as 2*high + low.
    outcomes = [
        (2 * r + p, 2 * p + q, 2 * q + r)
        for r, p, q in product((0, 1), repeat=3)
    ]
    return _uniform(outcomes, (4, 4, 4))


def _triadic() -> JointDistribution:
    # High bits all equal, low bits in a parity (xor-to-zero) relation.
    outcomes = [
        (2 * s + t1, 2 * s + t2, 2 * s + (t1 ^ t2))
        for s, t1, t2 in product((0, 1), repeat=3)
    ]
    return _uniform(outcomes, (4, 4, 4))


def _rdnxor() -> JointDistribution:
    # Shared bit r on every variable; low bits form xor. 1 redundant bit plus
    # 1 synergistic bit by construction.
    outcomes = [
        (2 * r + a, 2 * r + b, 2 * r + (a ^ b))
        for r, a, b in product((0, 1), repeat=3)
    ]
    return _uniform(outcomes, (4, 4, 4))


def _imperfectrdn() -> JointDistribution:
    return JointDistribution(
        3, (2, 2, 2), {(0, 0, 0): 0.4, (0, 1, 0): 0.1, (1, 1, 1): 0.5}
    )


def _wb_a() -> JointDistribution:
    # Williams & Beer (2010) figure 4A; the Subtle system of Griffith et al.
    return _uniform([(0, 0, 0), (0, 1, 1), (1, 1, 2)], (2, 2, 3))


def _wb_b() -> JointDistribution:
    # Williams & Beer (2010) figure 4B.
    return _uniform([(0, 0, 0), (0, 1, 1), (1, 0, 2), (1, 1, 1)], (2, 2, 3))


def _check_c(c: float) -> float:
    c = float(c)
    if not 0.0 <= c <= 0.25:
        raise ValueError(f"correlation parameter must lie in [0, 0.25], got {c}")
    return c


def _pair_pmf(c: float) -> dict[tuple[int, int], float]:
    return {
        (0, 0): 0.25 + c,
        (0, 1): 0.25 - c,
        (1, 0): 0.25 - c,
        (1, 1): 0.25 + c,
    }


def _corr_pair(c: float) -> JointDistribution:
    return JointDistribution(2, (2, 2), _pair_pmf(_check_c(c)))


def _copy_mech(c: float) -> JointDistribution:
    pmf = {(x1, x2, x1): p for (x1, x2), p in _pair_pmf(_check_c(c)).items()}
    return JointDistribution(3, (2, 2, 2), pmf)


def _and_mech(c: float) -> JointDistribution:
    pmf = {(x1, x2, x1 & x2): p for (x1, x2), p in _pair_pmf(_check_c(c)).items()}
    return JointDistribution(3, (2, 2, 2), pmf)


_GOLDEN: dict[str, dict] = {
    "xor": {
        "ped": {"{1}{23}": 1, "{2}{13}": 1, "{3}{12}": 1, "{12}{13}{23}": -1},
        "hcs": {
            "{1}": 1, "{2}": 1, "{3}": 1,
            "{12}": 2, "{13}": 2, "{23}": 2,
            "{1}{2}": 0, "{1}{2}{3}": 0,
        },
        **_pid_golden((2, -1, -1, 1, 0, 1), (1, 0, 0, 0, 0, 0)),
    },
    "and": {
        "hcs": {"{1}{2}": 0.0, "{1}{2}{3}": 0.1},
        **_pid_golden(
            (0.29, 0.21, 0.21, 0.10, 0.0, 0.10),
            (0.0, 0.35, 0.35, 0.10, 0.0, 0.10),
        ),
    },
    "or": {
        **_pid_golden(
            (0.29, 0.21, 0.21, 0.10, 0.0, 0.10),
            (0.0, 0.35, 0.35, 0.10, 0.0, 0.10),
        ),
    },
    "sum": {
        "ped": {
            "{1}{3}": 0.5,
            "{2}{3}": 0.5,
            "{1}{23}": 0.5,
            "{2}{13}": 0.5,
            "{3}{12}": 0.5,
            "{12}{13}{23}": -0.5,
        },
        **_pid_golden((1, 0, 0, 0.5, 0, 0.5), (0.5, 0.5, 0.5, 0, 0, 0)),
    },
    "dyadic": {
        "ped": {"{1}{2}": 1, "{1}{3}": 1, "{2}{3}": 1},
        "order": {"(1,1)": 3},
    },
    "triadic": {
        "ped": {
            "{1}{2}{3}": 1,
            "{1}{23}": 1,
            "{2}{13}": 1,
            "{3}{12}": 1,
            "{12}{13}{23}": -1,
        },
        "order": {"(1,1,1)": 1, "(1,2)": 3, "(2,2,2)": -1},
    },
    "rdnxor": {
        **_pid_golden((2, -1, -1, 2, 1, 1), (1, 0, 0, 1, 1, 0)),
    },
    "imperfectrdn": {
        **_pid_golden(
            (0.16, 0.23, -0.16, 0.77, 0.77, 0.0),
            (0.0, 0.23, 0.0, 0.77, 0.77, 0.0),
        ),
    },
    "wb_a": {
        **_pid_golden(
            (0.14, 0.53, 0.53, 0.39, 0.39, 0.0),
            (0.14, 0.53, 0.53, 0.39, 0.39, 0.0),
        ),
    },
    "wb_b": {
        **_pid_golden((0.0, 0.5, 1.0, 0.0, 0.0, 0.0), (0.0, 0.5, 1.0, 0.0, 0.0, 0.0)),
    },
}

_FIXED: dict[str, tuple[Callable[[], JointDistribution], str]] = {
    "xor": (_xor, "two uniform bits and their parity"),
    "and": (_and, "two uniform bits and their conjunction"),
    "or": (_or, "two uniform bits and their disjunction (relabeling of and)"),
    "sum": (_sum, "two uniform bits and their integer sum"),
    "dyadic": (_dyadic, "three 2-bit variables, one bit coupled per pair"),
    "triadic": (_triadic, "three 2-bit variables, shared bit plus parity bits"),
    "rdnxor": (_rdnxor, "redundant shared bit plus a parity bit on 2-bit variables"),
    "imperfectrdn": (_imperfectrdn, "almost-redundant pair with one noisy cell"),
    "wb_a": (_wb_a, "Williams & Beer (2010) figure 4A / Subtle"),
    "wb_b": (_wb_b, "Williams & Beer (2010) figure 4B"),
}

_FAMILIES: dict[str, tuple[Callable[[float], JointDistribution], str]] = {
    "corr_pair": (_corr_pair, "two uniform bits with correlation parameter c"),
    "copy_mech": (_copy_mech, "correlated input bits, output copies X1"),
    "and_mech": (_and_mech, "correlated input bits, output X1 AND X2"),
}

# 'corr_inputs' is accepted as a synonym for the bare correlated pair.
_ALIASES = {"corr_inputs": "corr_pair"}

SWEEP_FAMILIES = tuple(sorted(_FAMILIES))


def example_names() -> list[str]:
    return sorted(_FIXED) + sorted(_FAMILIES)


def make_example(name: str, **params: float) -> ExampleSpec:
    """Instantiate a named example; families require the parameter ``c``."""
    key = _ALIASES.get(name, name)
    if key in _FIXED:
        if params:
            raise ValueError(f"example {name!r} takes no parameters")
        builder, note = _FIXED[key]
        return ExampleSpec(
            name=key,
            params={},
            distribution=builder(),
            golden=_GOLDEN.get(key),
            note=note,
        )
    if key in _FAMILIES:
        if set(params) != {"c"}:
            raise ValueError(f"family {name!r} takes exactly one parameter: c")
        builder, note = _FAMILIES[key]
        c = _check_c(params["c"])
        return ExampleSpec(
            name=key, params={"c": c}, distribution=builder(c), golden=None, note=note
        )
    raise UnknownExampleError(f"unknown example {name!r}")


def list_examples() -> list[dict]:
    """Catalog rows for the fixed systems and parametric families."""
    rows = []
    for name in sorted(_FIXED):
        d = _FIXED[name][0]()
        rows.append(
            {
                "name": name,
                "n_vars": d.n_vars,
                "alphabet": " ".join(str(k) for k in d.alphabet_sizes),
                "params": "-",
                "golden": "yes" if name in _GOLDEN else "no",
                "note": _FIXED[name][1],
            }
        )
    for name in sorted(_FAMILIES):
        d = _FAMILIES[name][0](0.1)
        rows.append(
            {
                "name": name,
                "n_vars": d.n_vars,
                "alphabet": " ".join(str(k) for k in d.alphabet_sizes),
                "params": "c in [0, 0.25]",
                "golden": "no",
                "note": _FAMILIES[name][1],
            }
        )
    return rows


def sweep(
    family: str,
    grid: Sequence[float],
    *,
    ipf_tol: float = IPF_TOL,
    ipf_max_cycles: int = IPF_MAX_CYCLES,
) -> list[dict[str, float]]:
    """Evaluate a parametric family over a grid of c values.

    ``corr_pair`` rows carry the pair decomposition atoms plus mutual and
    pure mutual information; the mechanism families carry the monosemous
    decomposition atoms for target 3 and the redundancy split.
    """
    key = _ALIASES.get(family, family)
    if key not in _FAMILIES:
        raise UnknownExampleError(f"unknown sweep family {family!r}")
    builder = _FAMILIES[key][0]
    rows = []
    for c in grid:
        c = _check_c(c)
        d = builder(c)
        if key == "corr_pair":
            ped = compute_ped(d, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
            rows.append(
                {
                    "c": c,
                    "entropy": entropy(d),
                    "mutual_information": mutual_information(
                        d, SourceSet.of(1), SourceSet.of(2)
                    ),
                    "pure_mutual_information": ped.partial("{1}{2}"),
                    "redundant": ped.partial("{1}{2}"),
                    "unique_1": ped.partial("{1}"),
                    "unique_2": ped.partial("{2}"),
                    "synergy": ped.partial("{12}"),
                }
            )
        else:
            pid = pid_mono(d, 3, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
            source, mech = pid.redundancy_split
            rows.append(
                {
                    "c": c,
                    "mutual_information": mutual_information(
                        d, SourceSet.of(1, 2), SourceSet.of(3)
                    ),
                    "redundant": pid.atoms["redundant"],
                    "unique_1": pid.atoms["unique_1"],
                    "unique_2": pid.atoms["unique_2"],
                    "synergy": pid.atoms["synergy"],
                    "source": source,
                    "mechanistic": mech,
                }
            )
    return rows
