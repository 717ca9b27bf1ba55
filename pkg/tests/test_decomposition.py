import itertools

import pytest

from pedkit import (
    FULL_PED,
    JointDistribution,
    LatticeError,
    MONO_PED,
    SourceSet,
    combination_check,
    compute_ped,
    entropy,
    identity_axiom_check,
    make_example,
    marginalization_check,
    mech_source_split,
    merge_variables,
    mi_identities,
    mutual_information,
    order_summary,
    permute_variables,
    pid_full,
    pid_mono,
    positive_negative_split,
    pure_mi,
    pure_mi_chain_check,
    pure_mi_pid,
    with_copy_target,
)
from pedkit.lattice import downset_sums
from conftest import random_alphabets, random_joint

S = SourceSet.of

XOR = make_example("xor").distribution
AND = make_example("and").distribution
SUM = make_example("sum").distribution
DYADIC = make_example("dyadic").distribution
TRIADIC = make_example("triadic").distribution

CORPUS_3VAR = ("xor", "and", "or", "sum", "dyadic", "triadic", "rdnxor",
               "imperfectrdn", "wb_a", "wb_b")


def ped_atoms(ped):
    return {n.name: ped.lattice.partial[n] for n in ped.lattice.nodes}


def assert_ped_equals(ped, nonzero, tol=1e-9):
    atoms = ped_atoms(ped)
    for name, value in nonzero.items():
        assert atoms[name] == pytest.approx(value, abs=tol), name
    for name, value in atoms.items():
        if name not in nonzero:
            assert value == pytest.approx(0.0, abs=tol), name


# ---------------------------------------------------------------------------
# compute_ped
# ---------------------------------------------------------------------------


def test_ped_rejects_wrong_sizes():
    d = JointDistribution.from_pmf({(0,): 0.5, (1,): 0.5})
    with pytest.raises(LatticeError):
        compute_ped(d)


def test_dyadic_ped():
    ped = compute_ped(DYADIC)
    assert_ped_equals(ped, {"{1}{2}": 1.0, "{1}{3}": 1.0, "{2}{3}": 1.0})


def test_triadic_ped():
    ped = compute_ped(TRIADIC)
    assert_ped_equals(
        ped,
        {"{1}{2}{3}": 1.0, "{1}{23}": 1.0, "{2}{13}": 1.0, "{3}{12}": 1.0,
         "{12}{13}{23}": -1.0},
    )


def test_sum_ped():
    ped = compute_ped(SUM)
    assert_ped_equals(
        ped,
        {"{1}{3}": 0.5, "{2}{3}": 0.5, "{1}{23}": 0.5, "{2}{13}": 0.5,
         "{3}{12}": 0.5, "{12}{13}{23}": -0.5},
    )


def test_ped_top_redundancy_is_joint_entropy(rng):
    for _ in range(5):
        d = random_joint(rng, random_alphabets(rng, 3), zeros=0.1)
        ped = compute_ped(d)
        assert ped.redundancy("{123}") == pytest.approx(entropy(d), abs=1e-12)


def test_ped_moebius_consistency_and_total(rng):
    for _ in range(5):
        d = random_joint(rng, random_alphabets(rng, 3))
        ped = compute_ped(d)
        sums = downset_sums(ped.lattice.partial)
        for node in ped.lattice.nodes:
            assert abs(sums[node] - ped.lattice.redundancy[node]) <= 1e-9
        assert ped.total_partial == pytest.approx(entropy(d), abs=1e-9)


def test_ped_ignores_explicit_zero_rows(rng):
    d = random_joint(rng, (2, 2, 2), zeros=0.3)
    padded_pmf = dict(d.pmf)
    for o in d.outcomes():
        padded_pmf.setdefault(o, 0.0)
    padded = JointDistribution(d.n_vars, d.alphabet_sizes, padded_pmf)
    a = compute_ped(d).lattice.partial
    b = compute_ped(padded).lattice.partial
    for node, value in a.items():
        assert b[node] == value  # bit-identical


def test_ped_two_variable(rng):
    d = random_joint(rng, (2, 3))
    ped = compute_ped(d)
    assert len(ped.lattice.nodes) == 4
    pos, neg = positive_negative_split(d, S(1), S(2))
    assert ped.partial("{1}{2}") == pytest.approx(pos, abs=1e-12)
    assert ped.partial("{12}") == pytest.approx(neg, abs=1e-9)
    assert ped.total_partial == pytest.approx(entropy(d), abs=1e-9)


# ---------------------------------------------------------------------------
# rearrangement helpers
# ---------------------------------------------------------------------------


def test_permute_variables_roundtrip(rng):
    d = random_joint(rng, (2, 3, 4), zeros=0.2)
    dp = permute_variables(d, (3, 1, 2))
    assert dp.alphabet_sizes == (4, 2, 3)
    back = permute_variables(dp, (2, 3, 1))
    assert dict(back.pmf) == dict(d.pmf)


def test_merge_variables_matches_manual_packing():
    dm = merge_variables(AND, [S(1, 2), S(3)])
    assert dm.n_vars == 2
    assert dm.alphabet_sizes == (4, 2)
    assert entropy(dm) == pytest.approx(entropy(AND), abs=1e-12)
    # merging marginalizes out unused variables
    dm2 = merge_variables(AND, [S(1), S(3)])
    assert dm2.alphabet_sizes == (2, 2)
    assert mutual_information(dm2, S(1), S(2)) == pytest.approx(
        mutual_information(AND, S(1), S(3)), abs=1e-12
    )


# ---------------------------------------------------------------------------
# information decompositions (golden values live in test_corpus/acceptance;
# here: structural identities)
# ---------------------------------------------------------------------------


def test_full_pid_reconstructions(rng):
    systems = [make_example(n).distribution for n in ("xor", "and", "sum")]
    for _ in range(4):
        systems.append(random_joint(rng, random_alphabets(rng, 3)))
    for d in systems:
        for target in (1, 2, 3):
            pid = pid_full(d, target)
            others = [v for v in (1, 2, 3) if v != target]
            joint_mi = mutual_information(d, S(*others), S(target))
            assert sum(pid.atoms.values()) == pytest.approx(joint_mi, abs=1e-9)
            for slot, predictor in enumerate(others, start=1):
                assert pid.atoms["redundant"] + pid.atoms[f"unique_{slot}"] == pytest.approx(
                    mutual_information(d, S(predictor), S(target)), abs=1e-9
                )
            source, mech = pid.redundancy_split
            assert source + mech == pytest.approx(pid.atoms["redundant"], abs=1e-9)
            assert source >= -1e-12


def test_mono_pid_reconstruction(rng):
    for _ in range(4):
        d = random_joint(rng, random_alphabets(rng, 3))
        for target in (1, 2, 3):
            pid = pid_mono(d, target)
            others = [v for v in (1, 2, 3) if v != target]
            joint_mi = mutual_information(d, S(*others), S(target))
            assert sum(pid.atoms.values()) == pytest.approx(joint_mi, abs=1e-9)
            source, mech = pid.redundancy_split
            assert source + mech == pytest.approx(pid.atoms["redundant"], abs=1e-9)


def test_mech_source_split_matches_pid():
    for method, compute in ((FULL_PED, pid_full), (MONO_PED, pid_mono)):
        for target in (1, 2, 3):
            split = mech_source_split(AND, target, method)
            assert split == pytest.approx(compute(AND, target).redundancy_split)


def test_unique_atom_target_symmetry_on_gates():
    # Holds on these systems; equivalent to redundant-atom target symmetry,
    # which is not a theorem (ImperfectRdn breaks it; reported below).
    for name in ("xor", "and", "or", "sum", "dyadic", "triadic", "rdnxor",
                 "wb_a", "wb_b"):
        d = make_example(name).distribution
        for i, j in itertools.permutations((1, 2, 3), 2):
            k = next(v for v in (1, 2, 3) if v not in (i, j))
            pid_i = pid_full(d, i)
            pid_j = pid_full(d, j)
            slot_j = 1 if j < k else 2  # predictor j's slot when target is i
            slot_i = 1 if i < k else 2
            assert pid_i.atoms[f"unique_{slot_j}"] == pytest.approx(
                pid_j.atoms[f"unique_{slot_i}"], abs=1e-6
            ), (name, i, j)


def test_unique_atom_asymmetry_reported_on_imperfectrdn(capsys):
    d = make_example("imperfectrdn").distribution
    u_3_2 = pid_full(d, 3).atoms["unique_2"]
    u_2_3 = pid_full(d, 2).atoms["unique_2"]
    print(f"imperfectrdn unique-atom target symmetry: "
          f"I(3;{{2}})={u_3_2:.4f} vs I(2;{{3}})={u_2_3:.4f}")
    # Not asserted equal: this system is a counterexample.
    assert abs(u_3_2 - u_2_3) > 0.1


def test_redundant_atom_target_symmetry_reported(capsys):
    for name in CORPUS_3VAR:
        d = make_example(name).distribution
        values = [pid_full(d, t).atoms["redundant"] for t in (1, 2, 3)]
        spread = max(values) - min(values)
        print(f"{name}: full-PID redundant atom by target {values} spread {spread:.4f}")


def test_relabeling_invariance_of_atom_multiset():
    for name in ("xor", "and", "sum", "dyadic", "triadic"):
        d = make_example(name).distribution
        reference = sorted(compute_ped(d).lattice.partial.values())
        for perm in itertools.permutations((1, 2, 3)):
            atoms = sorted(compute_ped(permute_variables(d, perm)).lattice.partial.values())
            for a, b in zip(reference, atoms):
                assert a == pytest.approx(b, abs=1e-6), (name, perm)


# ---------------------------------------------------------------------------
# cross-lattice checks
# ---------------------------------------------------------------------------


def test_marginalization_check_product_of_bits():
    d = JointDistribution.from_pmf(
        {o: 0.125 for o in itertools.product((0, 1), repeat=3)}
    )
    rows = marginalization_check(d, 3)
    for row in rows:
        assert row.diff <= 1e-9
    by_name = {row.name: row for row in rows}
    assert by_name["marginal {1}"].lhs == pytest.approx(1.0)
    assert by_name["marginal {2}"].lhs == pytest.approx(1.0)
    assert by_name["marginal {1}{2}"].lhs == pytest.approx(0.0, abs=1e-12)


def test_marginalization_check_dyadic():
    rows = {r.name: r for r in marginalization_check(DYADIC, 3)}
    row = rows["marginal {1}{2}"]
    assert row.lhs == pytest.approx(1.0, abs=1e-9)  # shared bit of the kept pair
    assert row.diff <= 1e-6
    for row in rows.values():
        assert row.diff <= 1e-6


@pytest.mark.parametrize("name", CORPUS_3VAR)
@pytest.mark.parametrize("drop", [1, 2, 3])
def test_marginalization_check_corpus(name, drop):
    d = make_example(name).distribution
    for row in marginalization_check(d, drop):
        assert row.diff <= 1e-6, (name, drop, row)


@pytest.mark.parametrize("name", CORPUS_3VAR)
def test_combination_check_corpus(name):
    d = make_example(name).distribution
    for row in combination_check(d):
        assert row.diff <= 1e-6, (name, row)


def test_combination_check_values_for_independent_bits():
    d = JointDistribution.from_pmf(
        {o: 0.125 for o in itertools.product((0, 1), repeat=3)}
    )
    rows = {r.name: r for r in combination_check(d)}
    assert rows["combined {12}"].lhs == pytest.approx(2.0, abs=1e-9)
    assert rows["combined {3}"].lhs == pytest.approx(1.0, abs=1e-9)
    assert rows["combined {123}"].lhs == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", CORPUS_3VAR)
@pytest.mark.parametrize("target", [1, 2, 3])
def test_mi_identities_corpus(name, target):
    d = make_example(name).distribution
    for row in mi_identities(d, target):
        assert row.diff <= 1e-6, (name, target, row)


def test_mi_identities_xor_values():
    rows = {r.name: r for r in mi_identities(XOR, 3)}
    assert rows["I(X1;X3)"].lhs == pytest.approx(0.0, abs=1e-12)
    assert rows["I(X1,X2;X3)"].lhs == pytest.approx(1.0)
    assert rows["I(X1;X3|X2)"].lhs == pytest.approx(1.0)


def test_cross_lattice_checks_on_random_systems(rng):
    for _ in range(3):
        d = random_joint(rng, random_alphabets(rng, 3), zeros=0.15)
        for drop in (1, 2, 3):
            for row in marginalization_check(d, drop):
                assert row.diff <= 1e-6
        for row in combination_check(d):
            assert row.diff <= 1e-6
        for target in (1, 2, 3):
            for row in mi_identities(d, target):
                assert row.diff <= 1e-6


# ---------------------------------------------------------------------------
# order summary
# ---------------------------------------------------------------------------


def test_order_summaries():
    expected = {
        "dyadic": [0, 3, 0, 0, 0, 0, 0, 0],
        "triadic": [1, 0, 3, 0, -1, 0, 0, 0],
        "xor": [0, 0, 3, 0, -1, 0, 0, 0],
    }
    for name, values in expected.items():
        summary = order_summary(compute_ped(make_example(name).distribution))
        assert summary.as_list() == pytest.approx(values, abs=1e-9)


def test_order_summary_totals(rng):
    d = random_joint(rng, (2, 2, 2))
    summary = order_summary(compute_ped(d))
    assert sum(summary.values.values()) == pytest.approx(entropy(d), abs=1e-9)


# ---------------------------------------------------------------------------
# pure mutual information
# ---------------------------------------------------------------------------


def test_pure_mi_trivial_cases():
    indep = JointDistribution.from_pmf({(a, b): 0.25 for a in (0, 1) for b in (0, 1)})
    assert pure_mi(indep, S(1), S(2)) == pytest.approx(0.0, abs=1e-12)
    copy = JointDistribution.from_pmf({(0, 0): 0.5, (1, 1): 0.5})
    assert pure_mi(copy, S(1), S(2)) == pytest.approx(1.0)


def test_pure_mi_correlated_family_peak_gap():
    d = make_example("corr_pair", c=0.16).distribution
    gap = pure_mi(d, S(1), S(2)) - mutual_information(d, S(1), S(2))
    assert gap == pytest.approx(0.27, abs=0.01)


def test_pure_mi_equals_positive_split(rng):
    for _ in range(5):
        d = random_joint(rng, random_alphabets(rng, 3), zeros=0.1)
        a, b = S(1), S(2, 3)
        pos, _ = positive_negative_split(d, a, b)
        assert pure_mi(d, a, b) == pytest.approx(pos, abs=1e-9)


def test_pure_mi_bounds(rng):
    for _ in range(5):
        d = random_joint(rng, random_alphabets(rng, 2))
        value = pure_mi(d, S(1), S(2))
        assert value >= 0.0
        assert value >= mutual_information(d, S(1), S(2)) - 1e-12


def test_pure_mi_zero_iff_independent(rng):
    px = rng.dirichlet((2.0, 2.0, 2.0))
    py = rng.dirichlet((2.0, 2.0))
    product = JointDistribution.from_pmf(
        {(i, j): float(a * b) for i, a in enumerate(px) for j, b in enumerate(py)}
    )
    assert pure_mi(product, S(1), S(2)) == pytest.approx(0.0, abs=1e-12)
    dependent = make_example("corr_pair", c=0.05).distribution
    assert pure_mi(dependent, S(1), S(2)) > 1e-3


def test_pure_mi_pid_reconstructions():
    for name in ("xor", "and", "sum"):
        d = make_example(name).distribution
        for target in (1, 2, 3):
            pid = pure_mi_pid(d, target)
            others = [v for v in (1, 2, 3) if v != target]
            total = pure_mi(d, S(*others), S(target))
            assert sum(pid.atoms.values()) == pytest.approx(total, abs=1e-9)
            for slot, predictor in enumerate(others, start=1):
                assert pid.atoms["redundant"] + pid.atoms[f"unique_{slot}"] == pytest.approx(
                    pure_mi(d, S(predictor), S(target)), abs=1e-9
                )
            source, mech = pid.redundancy_split
            assert source + mech == pytest.approx(pid.atoms["redundant"], abs=1e-9)


def test_pure_mi_pid_of_independent_bits_is_zero():
    d = JointDistribution.from_pmf(
        {o: 0.125 for o in itertools.product((0, 1), repeat=3)}
    )
    pid = pure_mi_pid(d, 3)
    for value in pid.atoms.values():
        assert value == pytest.approx(0.0, abs=1e-12)


def test_pure_mi_pid_matches_mono_on_corpus():
    # Equality of the two decompositions is a property of these systems, not
    # a theorem; asserted only here.
    for name in CORPUS_3VAR:
        d = make_example(name).distribution
        pure = pure_mi_pid(d, 3)
        mono = pid_mono(d, 3)
        for atom in ("redundant", "unique_1", "unique_2", "synergy"):
            assert pure.atoms[atom] == pytest.approx(mono.atoms[atom], abs=1e-9), name


def test_pure_mi_chain_rule():
    cases = [
        (XOR, S(1), S(2), S(3)),
        (AND, S(1), S(2), S(3)),
        (TRIADIC, S(2), S(3), S(1)),
    ]
    for d, x, y, z in cases:
        row = pure_mi_chain_check(d, x, y, z)
        assert row.diff <= 1e-9


def test_pure_mi_chain_rule_independent_blocks():
    d = JointDistribution.from_pmf(
        {o: 0.125 for o in itertools.product((0, 1), repeat=3)}
    )
    row = pure_mi_chain_check(d, S(1), S(2), S(3))
    assert row.lhs == pytest.approx(0.0, abs=1e-12)
    assert row.rhs == pytest.approx(0.0, abs=1e-12)


def test_pure_mi_chain_rule_random(rng):
    for _ in range(5):
        d = random_joint(rng, random_alphabets(rng, 3), zeros=0.1)
        row = pure_mi_chain_check(d, S(1), S(2), S(3))
        assert row.diff <= 1e-9


def test_two_variable_redundant_synergy_bound(rng):
    for _ in range(100):
        d = random_joint(rng, random_alphabets(rng, 2), zeros=0.1)
        ped = compute_ped(d)
        assert ped.partial("{1}{2}") >= ped.partial("{12}") - 1e-12


# ---------------------------------------------------------------------------
# identity axiom
# ---------------------------------------------------------------------------


def test_identity_axiom_two_bit_copy():
    d = JointDistribution.from_pmf({(a, b): 0.25 for a in (0, 1) for b in (0, 1)})
    rows = identity_axiom_check(d)
    for row in rows:
        assert row.diff <= 1e-9
    d3 = with_copy_target(d)
    assert pid_full(d3, 3).atoms["redundant"] == pytest.approx(0.0, abs=1e-9)
    assert pid_mono(d3, 3).atoms["redundant"] == pytest.approx(0.0, abs=1e-9)


def test_identity_axiom_perfectly_correlated():
    d = JointDistribution.from_pmf({(0, 0): 0.5, (1, 1): 0.5})
    rows = {r.name: r for r in identity_axiom_check(d)}
    row = rows["H_partial({1}{2}{3}) = H_cap({1}{2})"]
    assert row.lhs == pytest.approx(1.0, abs=1e-9)
    assert row.diff <= 1e-9


@pytest.mark.parametrize("c", [0.05, 0.16, 0.25])
def test_identity_axiom_correlated_family(c):
    d = make_example("corr_pair", c=c).distribution
    for row in identity_axiom_check(d):
        assert row.diff <= 1e-6


def test_identity_axiom_random(rng):
    for _ in range(5):
        d = random_joint(rng, random_alphabets(rng, 2), zeros=0.1)
        for row in identity_axiom_check(d):
            assert row.diff <= 1e-6
