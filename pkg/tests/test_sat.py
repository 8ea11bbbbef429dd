import random

import pytest
from hypothesis import given, settings, strategies as st

from rasched.generate import minimal_star_formula, random_one_in_three, random_star_formula
from rasched.sat import (
    ClauseKind,
    CNFFormula,
    FormulaError,
    Literal,
    OneInThreeFormula,
    StarClause,
    StarFormula,
    brute_force_sat,
    kappa_of,
    lit,
    one_in_three_to_star,
    to_modified_3sat,
)
from rasched.core import SchedError


class TestBruteForceSat:
    def test_minimal_formula_all_true_fulfills(self, star3):
        assert star3.satisfied({1: True, 2: True, 3: True})
        assert brute_force_sat(star3) is not None

    def test_triple_repeat_unsatisfiable(self):
        f = OneInThreeFormula(1, ((lit(1), lit(1), lit(1)),))
        assert brute_force_sat(f) is None

    def test_forced_variable(self):
        f = OneInThreeFormula(1, ((lit(1), lit(-1), lit(-1)),))
        assert brute_force_sat(f) == {1: True}

    def test_first_witness_is_lexicographic(self, star3):
        # Both all-true and (F, F, T) fulfill; enumeration sees the latter first.
        assert brute_force_sat(star3) == {1: False, 2: False, 3: True}

    def test_variable_cap(self):
        f = CNFFormula(30, ((lit(1), lit(2)),))
        with pytest.raises(SchedError):
            brute_force_sat(f)
        assert brute_force_sat(f, var_cap=30) is not None


class TestStarFormulaValidation:
    def test_unbalanced_kinds_rejected(self):
        clause = StarClause((lit(1), lit(-1), lit(2)), ClauseKind.ONE_IN_THREE)
        with pytest.raises(FormulaError):
            StarFormula(3, (clause,))

    def test_occurrence_counts_enforced(self):
        clauses = (
            StarClause((lit(1), lit(1), lit(2)), ClauseKind.ONE_IN_THREE),
            StarClause((lit(-1), lit(-1), lit(-2)), ClauseKind.ONE_IN_THREE),
            StarClause((lit(2), lit(-2), lit(3)), ClauseKind.TWO_IN_THREE),
            StarClause((lit(-3), lit(3), lit(-3)), ClauseKind.TWO_IN_THREE),
        )
        with pytest.raises(FormulaError):
            StarFormula(3, clauses)

    def test_kind_ordering_enforced(self, star3):
        shuffled = (star3.clauses[2],) + star3.clauses[1:3] + (star3.clauses[0],)
        with pytest.raises(FormulaError):
            StarFormula(3, shuffled)


class TestOneInThreeToStar:
    def test_gadget_clauses_for_double_occurrence(self):
        # One source clause mentioning x twice is rejected by the generator,
        # so use two clauses; x1 occurs twice, so its copies are chained by
        # two exactly-two clauses plus the always-true helper clauses.
        f = OneInThreeFormula(
            3,
            (
                (lit(1), lit(2), lit(3)),
                (lit(-1), lit(2), lit(3)),
            ),
        )
        star = one_in_three_to_star(f)
        assert star.num_vars == 2 * 6
        chains = [
            c
            for c in star.clauses
            if c.kind is ClauseKind.TWO_IN_THREE
            and c.literals[0].positive
            and not c.literals[1].positive
            and c.literals[0].var != c.literals[1].var
        ]
        # One chain clause per occurrence of every variable.
        assert len(chains) == 6
        helper_clauses = [
            c
            for c in star.clauses
            if c.kind is ClauseKind.ONE_IN_THREE
            and c.literals[0].var == c.literals[1].var == c.literals[2].var
        ]
        assert len(helper_clauses) == 6
        for c in helper_clauses:
            assert (
                c.literals[0].positive
                and not c.literals[1].positive
                and not c.literals[2].positive
            )

    def test_equal_clause_kind_counts(self):
        rng = random.Random(5)
        f = random_one_in_three(rng, 4, 3)
        star = one_in_three_to_star(f)
        ones = sum(1 for c in star.clauses if c.kind is ClauseKind.ONE_IN_THREE)
        assert ones * 2 == len(star.clauses)

    def test_unsatisfiable_source_stays_unsatisfiable(self):
        f = OneInThreeFormula(
            3, ((lit(1), lit(2), lit(3)), (lit(-1), lit(-2), lit(-3)))
        )
        assert brute_force_sat(f) is None
        assert brute_force_sat(one_in_three_to_star(f)) is None

    def test_equisatisfiable_randomized(self):
        rng = random.Random(23)
        for _ in range(25):
            f = random_one_in_three(rng, rng.randint(3, 4), rng.randint(1, 3))
            star = one_in_three_to_star(f)
            assert (brute_force_sat(f) is None) == (brute_force_sat(star) is None)

    def test_unused_variable_rejected(self):
        with pytest.raises(FormulaError):
            one_in_three_to_star(OneInThreeFormula(4, ((lit(1), lit(2), lit(3)),)))


class TestKappa:
    def test_fixed_values(self, star3):
        kappa = kappa_of(star3)
        assert kappa(1, 1) == (1, 3)
        assert kappa(1, 3) == (2, 1)
        assert kappa(2, 3) == (1, 1)

    def test_lexicographic_order_of_occurrences(self, star3):
        kappa = kappa_of(star3)
        pairs = [(j, t) for j in (1, 2) for t in (1, 2, 3, 4)]
        ordered = sorted(pairs, key=lambda p: kappa(*p))
        assert ordered[:4] == [(2, 3), (1, 1), (1, 3), (2, 1)]

    def test_bijection_roundtrip(self, star3):
        kappa = kappa_of(star3)
        for j in range(1, 4):
            for t in range(1, 5):
                assert kappa.inverse(*kappa(j, t)) == (j, t)

    def test_bijection_randomized(self):
        rng = random.Random(29)
        for _ in range(10):
            f = random_star_formula(rng, 6)
            kappa = kappa_of(f)
            values = set(kappa.forward.values())
            assert len(values) == 4 * f.num_vars
            assert values == {
                (i, s) for i in range(1, len(f.clauses) + 1) for s in (1, 2, 3)
            }


class TestToModified3Sat:
    def test_two_occurrences_forced_equal(self):
        f = CNFFormula(1, ((lit(1),), (lit(-1),)))
        mod = to_modified_3sat(f)
        assert mod.is_modified()
        # The cycle makes the two copies agree, so the source contradiction
        # stays a contradiction.
        assert brute_force_sat(mod) is None

    def test_cycle_clauses_shape(self):
        f = CNFFormula(1, ((lit(1),), (lit(1),)))
        mod = to_modified_3sat(f)
        assert ((Literal(1, True), Literal(2, False))) in mod.clauses
        assert ((Literal(2, True), Literal(1, False))) in mod.clauses

    def test_equisatisfiable_randomized(self):
        rng = random.Random(31)
        from rasched.generate import random_3sat

        for _ in range(25):
            f = random_3sat(rng, rng.randint(3, 4), rng.randint(1, 4))
            mod = to_modified_3sat(f)
            assert mod.is_modified()
            assert (brute_force_sat(f) is None) == (brute_force_sat(mod) is None)

    def test_empty_formula(self):
        mod = to_modified_3sat(CNFFormula(0, ()))
        assert mod == CNFFormula(0, ())


@given(st.integers(min_value=1, max_value=2).map(lambda k: 3 * k))
@settings(max_examples=10, deadline=None)
def test_random_star_formulas_are_valid(num_vars):
    rng = random.Random(num_vars)
    f = random_star_formula(rng, num_vars)
    assert len(f.clauses) == 4 * num_vars // 3
    assert kappa_of(f) is not None
