import dataclasses
from fractions import Fraction

import pytest

from rasched.claims import check_claims
from rasched.core import Job, RAInstance, RARInstance, SchedError, Schedule
from rasched.meta import tag
from rasched.reductions import (
    ReductionOutput,
    build_schedule_rai,
    build_schedule_simple,
    reduce_rai,
    reduce_simple,
)

ALL_TRUE = {1: True, 2: True, 3: True}


class TestBuilderSchedulesPass:
    def test_simple(self, star3):
        out = reduce_simple(star3)
        report = check_claims(out, build_schedule_simple(out, ALL_TRUE))
        assert report.reduction_kind == "simple"
        assert report.all_passed
        assert {c.claim_id for c in report.checks} == {
            "job-count-per-machine",
            "machine-composition",
            "uniform-config",
            "truth-opposition",
            "clause-top-count",
        }

    def test_rai(self, star3):
        out = reduce_rai(star3)
        report = check_claims(out, build_schedule_rai(out, ALL_TRUE))
        assert report.all_passed
        assert {c.claim_id for c in report.checks} == {
            "job-count-per-machine",
            "first-or-last",
            "pair-split",
            "cjob-placement",
            "uniform-config",
            "truth-opposition",
            "clause-top-count",
            "signal-propagation",
        }


class TestPreconditions:
    def test_off_target_loads_rejected(self, star3):
        out = reduce_simple(star3)
        sched = build_schedule_simple(out, ALL_TRUE)
        # Move one variable job to its other eligible machine: loads break.
        job = next(j for j in out.instance.jobs if j.tag.kind == "VJob")
        other = sorted(out.instance.eligible[job.id] - {sched.assignment[job.id]})[0]
        bad = Schedule({**sched.assignment, job.id: other})
        with pytest.raises(SchedError):
            check_claims(out, bad)


class TestViolationsCarryWitnesses:
    def test_doctored_configuration_fails_uniformity(self, star3):
        out = reduce_simple(star3)
        sched = build_schedule_simple(out, ALL_TRUE)
        # Flip the recorded configuration of one variable job; the loads are
        # untouched but the machine now mixes configurations.
        victim = next(j for j in out.instance.jobs if j.tag.kind == "VJob")
        doctored_meta = dict(out.meta)
        doctored_meta[victim.id] = dataclasses.replace(
            doctored_meta[victim.id],
            truth_config=not doctored_meta[victim.id].truth_config,
        )
        doctored = ReductionOutput(
            out.kind, out.instance, out.target, doctored_meta, out.source
        )
        report = check_claims(doctored, sched)
        failing = {c.claim_id for c in report.failures()}
        assert "uniform-config" in failing
        witness = next(c for c in report.failures() if c.claim_id == "uniform-config")
        assert witness.witness

    def test_wrong_size_triple_detected(self):
        inst = RARInstance(
            1,
            ("e1",),
            {"e1": (Fraction(1),)},
            (
                Job("x", 12, tag("ElementJob", "a", 1)),
                Job("y", 12, tag("ElementJob", "b", 1)),
                Job("z", 23, tag("DummyJob", "c", 1, 1)),
            ),
            {"x": (0,), "y": (0,), "z": (0,)},
        )
        out = ReductionOutput("rar3", inst, 47, {j.id: j.tag for j in inst.jobs})
        sched = Schedule({"x": "e1", "y": "e1", "z": "e1"})
        report = check_claims(out, sched)
        assert not report.all_passed
        bad = next(c for c in report.failures() if c.claim_id == "triple-pattern")
        assert "e1" in bad.witness

    def test_kinds_without_claims_get_empty_report(self):
        inst = RAInstance(("m1",), (Job("a", 2),), {"a": frozenset({"m1"})})
        out = ReductionOutput("gb", inst, 2, {})
        report = check_claims(out, Schedule({"a": "m1"}))
        assert report.checks == ()
        assert report.all_passed
