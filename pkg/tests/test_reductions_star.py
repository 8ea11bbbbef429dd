import random

import pytest

from rasched.claims import check_claims
from rasched.core import SchedError, digits, evaluate, is_interval, total_size_check
from rasched.generate import minimal_star_formula, random_star_formula
from rasched.reductions import (
    RAI_TARGET,
    SIMPLE_TARGET,
    build_schedule_rai,
    build_schedule_simple,
    extract_assignment_rai,
    extract_assignment_simple,
    reduce_rai,
    reduce_simple,
)
from rasched.sat import brute_force_sat

ALL_TRUE = {1: True, 2: True, 3: True}


class TestSimpleConstruction:
    def test_machine_count(self, star3):
        out = reduce_simple(star3)
        # 6m + 2n machines with 3m = 2n, so 6n in total.
        assert len(out.instance.machines) == 6 * star3.num_vars

    def test_total_size(self, star3):
        out = reduce_simple(star3)
        assert out.instance.total_size() == 1932 * star3.num_vars
        assert total_size_check(out.instance, SIMPLE_TARGET)

    def test_variable_jobs_have_two_machines(self, star3):
        out = reduce_simple(star3)
        for job in out.instance.jobs:
            if job.tag is not None and job.tag.kind == "VJob":
                assert len(out.instance.eligible[job.id]) == 2

    def test_sizes_follow_roles(self, star3):
        out = reduce_simple(star3)
        by_kind = {}
        for job in out.instance.jobs:
            key = (job.tag.kind, job.tag.truth_config)
            by_kind.setdefault(key, set()).add(int(job.size))
        assert by_kind[("CJob", True)] == {100}
        assert by_kind[("CJob", False)] == {101}
        assert by_kind[("TJob", True)] == {100}
        assert by_kind[("TJob", False)] == {102}
        assert by_kind[("VJob", True)] == {111}
        assert by_kind[("VJob", False)] == {110}
        assert by_kind[("PrivateLoad", None)] == {111}


class TestSimpleSchedules:
    def test_all_true_gives_flat_loads(self, star3):
        out = reduce_simple(star3)
        sched = build_schedule_simple(out, ALL_TRUE)
        profile = evaluate(out.instance, sched)
        assert set(profile.loads.values()) == {SIMPLE_TARGET}

    def test_truth_machines_match_possible_patterns(self, star3):
        out = reduce_simple(star3)
        sched = build_schedule_simple(out, ALL_TRUE)
        hosted = {}
        for job_id, machine in sched.assignment.items():
            hosted.setdefault(machine, []).append(out.meta[job_id])
        for machine, infos in hosted.items():
            if out.meta[machine].kind != "TMach":
                continue
            kinds = sorted(i.kind for i in infos)
            assert kinds == ["TJob", "VJob", "VJob"]
            assert len({i.truth_config for i in infos}) == 1

    def test_extract_inverts_build(self, star3):
        out = reduce_simple(star3)
        for assignment in (ALL_TRUE, {1: False, 2: False, 3: True}):
            if not star3.satisfied(assignment):
                continue
            sched = build_schedule_simple(out, assignment)
            assert extract_assignment_simple(out, sched) == assignment

    def test_builder_rejects_non_fulfilling(self, star3):
        out = reduce_simple(star3)
        bad = {1: True, 2: True, 3: False}
        assert not star3.satisfied(bad)
        with pytest.raises(SchedError):
            build_schedule_simple(out, bad)

    def test_randomized_round_trips(self):
        rng = random.Random(61)
        done = 0
        while done < 6:
            f = random_star_formula(rng, 3)
            witness = brute_force_sat(f)
            if witness is None:
                continue
            out = reduce_simple(f)
            sched = build_schedule_simple(out, witness)
            assert extract_assignment_simple(out, sched) == witness
            assert check_claims(out, sched).all_passed
            done += 1


class TestRaiConstruction:
    def test_machine_count(self, star3):
        out = reduce_rai(star3)
        n = star3.num_vars
        assert len(out.instance.machines) == 4 * n * n + 6 * n

    def test_total_size(self, star3):
        out = reduce_rai(star3)
        assert total_size_check(out.instance, RAI_TARGET)

    def test_last_digit_conservation(self, star3):
        out = reduce_rai(star3)
        n = star3.num_vars
        last = sum(int(j.size) % 10 for j in out.instance.jobs)
        assert last == 8 * n * n + 12 * n

    def test_highway_job_counts(self, star3):
        out = reduce_rai(star3)
        n = star3.num_vars
        for config in (True, False):
            count = sum(
                1
                for j in out.instance.jobs
                if j.tag.kind == "HJob" and j.tag.truth_config is config
            )
            assert count == 2 * n * (n + 1)

    def test_block_order_of_minimal_formula(self, star3):
        # Frozen from the occurrence table of the fixed formula: successor
        # blocks sort by decreasing occurrence index, predecessor blocks by
        # increasing.
        out = reduce_rai(star3)
        assert out.instance.order[:20] == (
            "TMach_1_1",
            "TMach_1_2",
            "GMach_1_4",
            "GMach_1_2",
            "GMach_1_3",
            "GMach_1_1",
            "BMachIn_1_1_2",
            "BMachIn_1_3_2",
            "BMachIn_1_2_2",
            "BMachIn_1_4_2",
            "TMach_2_1",
            "TMach_2_2",
            "GMach_2_2",
            "BMachOut_1_4_2",
            "BMachOut_1_2_2",
            "GMach_2_4",
            "GMach_2_1",
            "BMachOut_1_3_2",
            "BMachOut_1_1_2",
            "GMach_2_3",
        )

    def test_interval_property(self, star3):
        out = reduce_rai(star3)
        assert is_interval(out.instance.base, out.instance.order)

    def test_digit_discipline(self, star3):
        # Ten-digit sizes, every digit at most 2.
        out = reduce_rai(star3)
        for job in out.instance.jobs:
            assert max(digits(int(job.size), 10)) <= 2


class TestRaiSchedules:
    def test_all_true_gives_flat_loads(self, star3):
        out = reduce_rai(star3)
        sched = build_schedule_rai(out, ALL_TRUE)
        profile = evaluate(out.instance, sched)
        assert set(profile.loads.values()) == {RAI_TARGET}

    def test_gateway_machines_pair_reversed_signal(self, star3):
        out = reduce_rai(star3)
        sched = build_schedule_rai(out, ALL_TRUE)
        hosted = {}
        for job_id, machine in sched.assignment.items():
            hosted.setdefault(machine, []).append(out.meta[job_id])
        for machine, infos in hosted.items():
            mk = out.meta[machine].kind
            if mk != "GMach":
                continue
            kinds = sorted(i.kind for i in infos)
            assert kinds == ["HJob", "PrivateLoad", "VJob"]
            configs = {i.truth_config for i in infos if i.truth_config is not None}
            assert len(configs) == 1
            j, t = (int(v) for v in out.meta[machine].indices)
            carried = ALL_TRUE[j] if t <= 2 else not ALL_TRUE[j]
            assert configs == {not carried}

    def test_at_most_four_jobs_per_machine(self, star3):
        out = reduce_rai(star3)
        sched = build_schedule_rai(out, ALL_TRUE)
        per_machine = {}
        for job_id, machine in sched.assignment.items():
            per_machine[machine] = per_machine.get(machine, 0) + 1
        assert max(per_machine.values()) <= 4

    def test_extract_inverts_build(self, star3):
        out = reduce_rai(star3)
        sched = build_schedule_rai(out, ALL_TRUE)
        assert extract_assignment_rai(out, sched) == ALL_TRUE

    def test_claims_pass_on_built_schedule(self, star3):
        out = reduce_rai(star3)
        sched = build_schedule_rai(out, ALL_TRUE)
        report = check_claims(out, sched)
        assert report.all_passed, report.failures()
