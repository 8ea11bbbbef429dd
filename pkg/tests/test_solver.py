import random
from fractions import Fraction

import pytest

from oracles import exhaustive_exact, exhaustive_makespan, exhaustive_min_load
from rasched.claims import check_claims
from rasched.core import Job, RAInstance, Schedule, evaluate
from rasched.generate import minimal_star_formula, random_ra_instance
from rasched.meta import tag
from rasched.reductions import (
    RAI_TARGET,
    SIMPLE_TARGET,
    reduce_rai,
    reduce_simple,
)
from rasched.solver import (
    SolveBudget,
    Verdict,
    decide_exact_load,
    decide_makespan,
    decide_min_load,
    enumerate_exact,
)


def plain(machines, jobs):
    """jobs: list of (id, size, eligible ids)."""
    return RAInstance(
        tuple(machines),
        tuple(Job(j, s) for j, s, _ in jobs),
        {j: frozenset(e) for j, _, e in jobs},
    )


def truth_gadget():
    """Two machines mirroring the two-way truth assignment choice.

    The truth jobs weigh 100 and 102, the variable jobs 111 and 110 twice
    each, so either machine hosts the light truth job with the heavy pair;
    exactly two schedules exist up to interchange of the identical pairs.
    """
    jobs = (
        Job("tj_T", 100, tag("TJob", 1, config=True)),
        Job("tj_F", 102, tag("TJob", 1, config=False)),
        Job("v1_T", 111, tag("VJob", 1, 1, config=True)),
        Job("v2_T", 111, tag("VJob", 1, 2, config=True)),
        Job("v3_F", 110, tag("VJob", 1, 3, config=False)),
        Job("v4_F", 110, tag("VJob", 1, 4, config=False)),
    )
    both = frozenset({"TMach_1_1", "TMach_1_2"})
    return RAInstance(
        ("TMach_1_1", "TMach_1_2"), jobs, {j.id: both for j in jobs}
    )


class TestDecideMakespan:
    def test_single_machine_fits(self):
        inst = plain(["m1"], [("a", 1, ["m1"]), ("b", 2, ["m1"])])
        assert decide_makespan(inst, 3).found

    def test_pigeonhole_none(self):
        inst = plain(
            ["m1", "m2"],
            [("a", 1, ["m1"]), ("b", 1, ["m1"]), ("c", 1, ["m1"])],
        )
        assert decide_makespan(inst, 2).verdict is Verdict.NONE

    def test_found_schedule_revalidates(self):
        inst = plain(
            ["m1", "m2"],
            [("a", 2, ["m1", "m2"]), ("b", 2, ["m1", "m2"]), ("c", 2, ["m1", "m2"])],
        )
        result = decide_makespan(inst, 4)
        assert result.found
        assert evaluate(inst, result.schedule).makespan <= 4

    def test_negative_target_rejected(self):
        inst = plain(["m1"], [("a", 1, ["m1"])])
        with pytest.raises(ValueError):
            decide_makespan(inst, -1)

    def test_empty_instance(self):
        assert decide_makespan(RAInstance((), (), {}), 0).found


class TestDecideExactLoad:
    def test_single_job_exact(self):
        inst = plain(["m1"], [("a", 7, ["m1"])])
        assert decide_exact_load(inst, 7).found

    def test_precondition_enforced(self):
        inst = plain(["m1"], [("a", 5, ["m1"])])
        with pytest.raises(ValueError):
            decide_exact_load(inst, 4)

    def test_simple_reduction_satisfiable(self, star3):
        out = reduce_simple(star3)
        result = decide_exact_load(out.instance, SIMPLE_TARGET)
        assert result.found
        assert set(evaluate(out.instance, result.schedule).loads.values()) == {
            Fraction(SIMPLE_TARGET)
        }

    def test_budget_exceeded_is_distinct(self, star3):
        out = reduce_rai(star3)
        result = decide_exact_load(
            out.instance, RAI_TARGET, budget=SolveBudget(max_nodes=5)
        )
        assert result.verdict is Verdict.BUDGET
        assert result.schedule is None


class TestDecideMinLoad:
    def test_unrestricted_small_target(self):
        inst = plain(["m1", "m2"], [("a", 3, ["m1", "m2"]), ("b", 1, ["m1", "m2"])])
        assert decide_min_load(inst, 1).found

    def test_infeasible_min(self):
        inst = plain(["m1", "m2"], [("a", 3, ["m1"]), ("b", 1, ["m1"])])
        assert decide_min_load(inst, 1).verdict is Verdict.NONE

    def test_zero_target_always_found(self):
        inst = plain(["m1", "m2"], [("a", 3, ["m1"])])
        assert decide_min_load(inst, 0).found

    def test_agrees_with_exact_on_conserving_instance(self, star3):
        out = reduce_simple(star3)
        a = decide_exact_load(out.instance, SIMPLE_TARGET)
        b = decide_min_load(out.instance, SIMPLE_TARGET)
        assert a.verdict == b.verdict


class TestEnumerate:
    def test_truth_gadget_has_two_schedules(self):
        inst = truth_gadget()
        schedules, complete = enumerate_exact(inst, 322)
        assert complete
        assert len(schedules) == 2
        for s in schedules:
            assert set(evaluate(inst, s).loads.values()) == {Fraction(322)}

    def test_private_load_only(self):
        inst = plain(["m1"], [("private", 5, ["m1"])])
        schedules, complete = enumerate_exact(inst, 5)
        assert complete and len(schedules) == 1

    def test_cap_stops_early(self, star3):
        out = reduce_simple(star3)
        schedules, complete = enumerate_exact(out.instance, SIMPLE_TARGET, cap=1)
        assert len(schedules) == 1 and not complete

    def test_simple_reduction_schedules_pass_claims(self, star3):
        out = reduce_simple(star3)
        schedules, complete = enumerate_exact(out.instance, SIMPLE_TARGET, cap=64)
        assert complete
        # One canonical schedule per fulfilling assignment of the formula.
        assert len(schedules) == 2
        for s in schedules:
            assert check_claims(out, s).all_passed


class TestDeterminism:
    def test_identical_runs(self):
        rng = random.Random(113)
        inst = random_ra_instance(rng, 4, 8)
        first = decide_makespan(inst, 6)
        second = decide_makespan(inst, 6)
        assert first.verdict == second.verdict
        assert first.schedule == second.schedule
        assert first.nodes == second.nodes

    def test_enumerate_deterministic(self):
        inst = truth_gadget()
        a, _ = enumerate_exact(inst, 322)
        b, _ = enumerate_exact(inst, 322)
        assert a == b


class TestParallel:
    def test_workers_agree_with_single(self, star3):
        out = reduce_simple(star3)
        single = decide_exact_load(out.instance, SIMPLE_TARGET)
        multi = decide_exact_load(out.instance, SIMPLE_TARGET, workers=2)
        assert single.verdict == multi.verdict
        assert multi.found and evaluate(out.instance, multi.schedule).makespan == 322

    def test_workers_on_unsolvable(self):
        inst = plain(
            ["m1", "m2"],
            [("a", 1, ["m1"]), ("b", 1, ["m1"]), ("c", 2, ["m1", "m2"])],
        )
        assert decide_makespan(inst, 1, workers=2).verdict is Verdict.NONE


class TestOracleAgreement:
    def test_makespan_against_exhaustive(self):
        rng = random.Random(127)
        for _ in range(40):
            inst = random_ra_instance(rng, rng.randint(2, 6), rng.randint(2, 9))
            total = sum(j.size for j in inst.jobs)
            lb = max(max(j.size for j in inst.jobs), -(-total // len(inst.machines)))
            for target in {max(1, lb - 1), lb, lb + 2}:
                assert decide_makespan(inst, target).found == exhaustive_makespan(
                    inst, target
                )

    def test_exact_and_min_against_exhaustive(self):
        rng = random.Random(131)
        checked = 0
        for _ in range(60):
            inst = random_ra_instance(rng, rng.randint(2, 4), rng.randint(2, 7))
            total = sum(j.size for j in inst.jobs)
            m = len(inst.machines)
            if total % m == 0:
                target = total // m
                assert decide_exact_load(inst, target).found == exhaustive_exact(
                    inst, target
                )
                checked += 1
            target = rng.randint(0, max(1, total // m))
            assert decide_min_load(inst, target).found == exhaustive_min_load(
                inst, target
            )
        assert checked >= 5
