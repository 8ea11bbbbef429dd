"""Star-formula reductions to restricted assignment instances.

Two constructions share the truth-assignment and clause gadget idea.  The
plain one uses three-digit sizes and arbitrary eligible sets (target 322).
The interval one arranges all machines on a line, encodes gadget roles into
ten-digit sizes, and routes each truth decision to its clause through bridge
and highway jobs so that every eligible set is contiguous (target
3111111112).
"""

from __future__ import annotations

import math
from typing import Mapping

from ..core import Job, RAIInstance, RAInstance, SchedError, Schedule, evaluate
from ..meta import GadgetMeta, tag
from ..sat import ClauseKind, Kappa, StarFormula, kappa_of
from .base import ReductionOutput, config_suffix

SIMPLE_TARGET = 322

RAI_TARGET = 3111111112

# Ten-digit size table for the interval construction.  Digit columns:
# job count bound, bridge, highway, clause, truth, the four variable
# occurrence markers, and the truth-value digit.
_RAI_JOB_SIZE = {
    ("CJob", True): 1001000000,
    ("CJob", False): 1001000001,
    ("TJob", True): 1000100002,
    ("TJob", False): 1000100000,
    ("VJob", 1, True): 1000010000,
    ("VJob", 1, False): 1000010001,
    ("VJob", 2, True): 1000001000,
    ("VJob", 2, False): 1000001001,
    ("VJob", 3, True): 1000000100,
    ("VJob", 3, False): 1000000101,
    ("VJob", 4, True): 1000000010,
    ("VJob", 4, False): 1000000011,
    ("BJob", True): 1100000000,
    ("BJob", False): 1100000001,
    ("HJob", True): 1010000001,
    ("HJob", False): 1010000000,
}

_RAI_PRIVATE = {
    "CMach": 1100111111,
    ("TMach", 1): 111000110,
    ("TMach", 2): 111011000,
    ("GMach", 1): 1101101111,
    ("GMach", 2): 1101110111,
    ("GMach", 3): 1101111011,
    ("GMach", 4): 1101111101,
    "BMachIn": 1001111111,
    "BMachOut": 1001111111,
}


def _tmach(j: int, q: int) -> str:
    return f"TMach_{j}_{q}"


def _cmach(i: int, s: int) -> str:
    return f"CMach_{i}_{s}"


def _gmach(j: int, t: int) -> str:
    return f"GMach_{j}_{t}"


def _bmach_in(j: int, t: int, jp: int) -> str:
    return f"BMachIn_{j}_{t}_{jp}"


def _bmach_out(j: int, t: int, jp: int) -> str:
    return f"BMachOut_{j}_{t}_{jp}"


def _cjob(i: int, sp: int, config: bool) -> str:
    return f"CJob_{i}_{sp}_{config_suffix(config)}"


def _tjob(j: int, config: bool) -> str:
    return f"TJob_{j}_{config_suffix(config)}"


def _vjob(j: int, t: int, config: bool) -> str:
    return f"VJob_{j}_{t}_{config_suffix(config)}"


def _bjob(j: int, t: int, jp: int, config: bool) -> str:
    return f"BJob_{j}_{t}_{jp}_{config_suffix(config)}"


def _hjob(j: int, t: int, jp: int, config: bool) -> str:
    return f"HJob_{j}_{t}_{jp}_{config_suffix(config)}"


def clause_job_configs(kind: ClauseKind) -> tuple[bool, bool, bool]:
    """Truth configurations of the three clause jobs of one clause."""
    return (True, kind is ClauseKind.TWO_IN_THREE, False)


def _clause_kinds(formula: StarFormula) -> dict[int, ClauseKind]:
    return {i: c.kind for i, c in enumerate(formula.clauses, start=1)}


def reduce_simple(formula: StarFormula) -> ReductionOutput:
    """Restricted assignment instance with target 322.

    Clause machines carry a private load of 111 and take one clause job plus
    one variable job; truth assignment machines take one truth job plus two
    variable jobs.  Variable jobs are eligible on their truth machine and the
    clause slot of the corresponding occurrence.
    """
    kappa = kappa_of(formula)
    n = formula.num_vars
    num_clauses = len(formula.clauses)

    machines: list[str] = []
    meta: dict[str, GadgetMeta] = {}
    jobs: list[Job] = []
    eligible: dict[str, frozenset[str]] = {}

    def add_job(job_id: str, size: int, elig: frozenset[str], m: GadgetMeta) -> None:
        jobs.append(Job(job_id, size, m))
        eligible[job_id] = elig
        meta[job_id] = m

    for j in range(1, n + 1):
        for q in (1, 2):
            mid = _tmach(j, q)
            machines.append(mid)
            meta[mid] = tag("TMach", j, q)
    for i in range(1, num_clauses + 1):
        for s in (1, 2, 3):
            mid = _cmach(i, s)
            machines.append(mid)
            meta[mid] = tag("CMach", i, s)

    for i, clause in enumerate(formula.clauses, start=1):
        cmachs = frozenset(_cmach(i, s) for s in (1, 2, 3))
        for s in (1, 2, 3):
            mid = _cmach(i, s)
            add_job(f"PL_{mid}", 111, frozenset([mid]), tag("PrivateLoad", mid))
        for sp, config in enumerate(clause_job_configs(clause.kind), start=1):
            add_job(
                _cjob(i, sp, config),
                100 if config else 101,
                cmachs,
                tag("CJob", i, sp, config=config),
            )

    for j in range(1, n + 1):
        tmachs = frozenset([_tmach(j, 1), _tmach(j, 2)])
        add_job(_tjob(j, True), 100, tmachs, tag("TJob", j, config=True))
        add_job(_tjob(j, False), 102, tmachs, tag("TJob", j, config=False))
        for t in range(1, 5):
            pair = frozenset([_tmach(j, math.ceil(t / 2)), _cmach(*kappa(j, t))])
            for config in (True, False):
                add_job(
                    _vjob(j, t, config),
                    111 if config else 110,
                    pair,
                    tag("VJob", j, t, config=config),
                )

    instance = RAInstance(tuple(machines), tuple(jobs), eligible)
    return ReductionOutput("simple", instance, SIMPLE_TARGET, meta, source=formula)


def _contributed(assignment: Mapping[int, bool], j: int, t: int) -> bool:
    """Truth value the t-th occurrence of x_j carries into its clause."""
    return assignment[j] if t <= 2 else not assignment[j]


def _place_clause_jobs(
    formula: StarFormula,
    kappa: Kappa,
    slot_config: Mapping[tuple[int, int], bool],
    sched: dict[str, str],
) -> None:
    """Pair each clause job with a same-configuration clause slot."""
    for i, clause in enumerate(formula.clauses, start=1):
        free = {s: slot_config[(i, s)] for s in (1, 2, 3)}
        for sp, config in enumerate(clause_job_configs(clause.kind), start=1):
            s = next((s for s in sorted(free) if free[s] == config), None)
            if s is None:
                raise SchedError(
                    f"assignment does not fulfill clause {i}: "
                    f"no slot left for a {config_suffix(config)} clause job"
                )
            del free[s]
            sched[_cjob(i, sp, config)] = _cmach(i, s)


def build_schedule_simple(
    out: ReductionOutput, assignment: Mapping[int, bool]
) -> Schedule:
    """Load-322-everywhere schedule from a fulfilling assignment."""
    if out.kind != "simple":
        raise ValueError("expected a simple reduction output")
    formula = out.source
    assert isinstance(formula, StarFormula)
    kappa = kappa_of(formula)
    sched: dict[str, str] = {}

    for job in out.instance.jobs:
        if job.tag is not None and job.tag.kind == "PrivateLoad":
            (machine_id,) = job.tag.indices
            sched[job.id] = str(machine_id)

    slot_config: dict[tuple[int, int], bool] = {}
    for j in range(1, formula.num_vars + 1):
        tv = assignment[j]
        for t in range(1, 5):
            carried = _contributed(assignment, j, t)
            sched[_vjob(j, t, carried)] = _cmach(*kappa(j, t))
            sched[_vjob(j, t, not carried)] = _tmach(j, math.ceil(t / 2))
            slot_config[kappa(j, t)] = carried
        sched[_tjob(j, not tv)] = _tmach(j, 1)
        sched[_tjob(j, tv)] = _tmach(j, 2)

    _place_clause_jobs(formula, kappa, slot_config, sched)
    return Schedule(sched)


def _require_exact_loads(out: ReductionOutput, schedule: Schedule) -> None:
    profile = evaluate(out.instance, schedule)
    off = sorted(m for m, v in profile.loads.items() if v != out.target)
    if off:
        raise SchedError(f"loads differ from target on: {', '.join(off)}")


def extract_assignment_simple(
    out: ReductionOutput, schedule: Schedule
) -> dict[int, bool]:
    """Truth assignment read off a load-322-everywhere schedule.

    The value of a variable is the configuration of the variable job that its
    first occurrence sends to the clause side.  Structural claims are checked
    first; a violated claim is reported by name.
    """
    from ..claims import check_claims

    if out.kind != "simple":
        raise ValueError("expected a simple reduction output")
    _require_exact_loads(out, schedule)
    report = check_claims(out, schedule)
    if not report.all_passed:
        failed = ", ".join(c.claim_id for c in report.failures())
        raise SchedError(f"schedule violates structural claims: {failed}")

    on_clause_side: dict[tuple[int, int], bool] = {}
    for job_id, machine_id in schedule.assignment.items():
        jm = out.meta.get(job_id)
        mm = out.meta.get(machine_id)
        if jm is None or mm is None or jm.kind != "VJob" or mm.kind != "CMach":
            continue
        j, t = jm.indices
        on_clause_side[(int(j), int(t))] = bool(jm.truth_config)
    assignment = {}
    n = _num_vars(out)
    for j in range(1, n + 1):
        assignment[j] = on_clause_side[(j, 1)]
    return assignment


def _num_vars(out: ReductionOutput) -> int:
    return max(int(m.indices[0]) for m in out.meta.values() if m.kind == "TMach")


def reduce_rai(formula: StarFormula) -> ReductionOutput:
    """Interval-restricted instance with target 3111111112.

    Machines are laid out as truth blocks, successor blocks of gateway and
    outgoing bridge machines (ordered by decreasing occurrence index),
    predecessor blocks of incoming bridge machines (increasing), and finally
    the clause blocks.  Every job is eligible on the contiguous run between
    its first and last machine.
    """
    kappa = kappa_of(formula)
    n = formula.num_vars
    num_clauses = len(formula.clauses)

    order: list[str] = []
    meta: dict[str, GadgetMeta] = {}

    def add_machine(mid: str, m: GadgetMeta) -> None:
        order.append(mid)
        meta[mid] = m

    for j in range(1, n + 1):
        if j > 1:
            pred = [
                (kappa(jp, t), _bmach_in(jp, t, j), tag("BMachIn", jp, t, j))
                for jp in range(1, j)
                for t in range(1, 5)
            ]
            for _, mid, m in sorted(pred):
                add_machine(mid, m)
        add_machine(_tmach(j, 1), tag("TMach", j, 1))
        add_machine(_tmach(j, 2), tag("TMach", j, 2))
        succ = [(kappa(j, t), _gmach(j, t), tag("GMach", j, t)) for t in range(1, 5)]
        succ += [
            (kappa(jp, t), _bmach_out(jp, t, j), tag("BMachOut", jp, t, j))
            for jp in range(1, j)
            for t in range(1, 5)
        ]
        for _, mid, m in sorted(succ, reverse=True):
            add_machine(mid, m)
    for i in range(1, num_clauses + 1):
        for s in (1, 2, 3):
            add_machine(_cmach(i, s), tag("CMach", i, s))

    position = {mid: k for k, mid in enumerate(order)}
    jobs: list[Job] = []
    eligible: dict[str, frozenset[str]] = {}
    interval: dict[str, tuple[int, int]] = {}

    def add_job(job_id: str, size: int, first: str, last: str, m: GadgetMeta) -> None:
        lo, hi = position[first] + 1, position[last] + 1
        if lo > hi:
            raise SchedError(f"job {job_id}: first machine after last")
        jobs.append(Job(job_id, size, m))
        eligible[job_id] = frozenset(order[lo - 1 : hi])
        interval[job_id] = (lo, hi)
        meta[job_id] = m

    for mid in order:
        kind = meta[mid].kind
        idx = meta[mid].indices
        if kind == "CMach":
            size = _RAI_PRIVATE["CMach"]
        elif kind == "TMach":
            size = _RAI_PRIVATE[("TMach", int(idx[1]))]
        elif kind == "GMach":
            size = _RAI_PRIVATE[("GMach", int(idx[1]))]
        else:
            size = _RAI_PRIVATE[kind]
        add_job(f"PL_{mid}", size, mid, mid, tag("PrivateLoad", mid))

    for i, clause in enumerate(formula.clauses, start=1):
        for sp, config in enumerate(clause_job_configs(clause.kind), start=1):
            add_job(
                _cjob(i, sp, config),
                _RAI_JOB_SIZE[("CJob", config)],
                _cmach(i, 1),
                _cmach(i, 3),
                tag("CJob", i, sp, config=config),
            )

    for j in range(1, n + 1):
        for config in (True, False):
            add_job(
                _tjob(j, config),
                _RAI_JOB_SIZE[("TJob", config)],
                _tmach(j, 1),
                _tmach(j, 2),
                tag("TJob", j, config=config),
            )
        for t in range(1, 5):
            for config in (True, False):
                add_job(
                    _vjob(j, t, config),
                    _RAI_JOB_SIZE[("VJob", t, config)],
                    _tmach(j, math.ceil(t / 2)),
                    _gmach(j, t),
                    tag("VJob", j, t, config=config),
                )
            for jp in range(j + 1, n + 1):
                for config in (True, False):
                    add_job(
                        _bjob(j, t, jp, config),
                        _RAI_JOB_SIZE[("BJob", config)],
                        _bmach_in(j, t, jp),
                        _bmach_out(j, t, jp),
                        tag("BJob", j, t, jp, config=config),
                    )
            for jp in range(j, n + 1):
                first = _bmach_out(j, t, jp) if jp > j else _gmach(j, t)
                last = _bmach_in(j, t, jp + 1) if jp < n else _cmach(*kappa(j, t))
                for config in (True, False):
                    add_job(
                        _hjob(j, t, jp, config),
                        _RAI_JOB_SIZE[("HJob", config)],
                        first,
                        last,
                        tag("HJob", j, t, jp, config=config),
                    )

    base = RAInstance(tuple(order), tuple(jobs), eligible)
    instance = RAIInstance(base, tuple(order), interval)
    return ReductionOutput("rai", instance, RAI_TARGET, meta, source=formula)


def build_schedule_rai(
    out: ReductionOutput, assignment: Mapping[int, bool]
) -> Schedule:
    """Exact-target schedule for the interval construction.

    Along each occurrence's route the configuration alternates: the gateway
    and every outgoing bridge machine hold the reversed signal, the incoming
    bridge machines and finally the clause machine hold the original one.
    """
    if out.kind != "rai":
        raise ValueError("expected an interval reduction output")
    formula = out.source
    assert isinstance(formula, StarFormula)
    kappa = kappa_of(formula)
    n = formula.num_vars
    sched: dict[str, str] = {}

    for job in out.instance.jobs:
        if job.tag is not None and job.tag.kind == "PrivateLoad":
            (machine_id,) = job.tag.indices
            sched[job.id] = str(machine_id)

    slot_config: dict[tuple[int, int], bool] = {}
    for j in range(1, n + 1):
        tv = assignment[j]
        for t in range(1, 5):
            carried = _contributed(assignment, j, t)
            reversed_ = not carried
            sched[_hjob(j, t, n, carried)] = _cmach(*kappa(j, t))
            slot_config[kappa(j, t)] = carried
            for jp in range(j + 1, n + 1):
                sched[_hjob(j, t, jp, reversed_)] = _bmach_out(j, t, jp)
                sched[_bjob(j, t, jp, reversed_)] = _bmach_out(j, t, jp)
                sched[_hjob(j, t, jp - 1, carried)] = _bmach_in(j, t, jp)
                sched[_bjob(j, t, jp, carried)] = _bmach_in(j, t, jp)
            sched[_hjob(j, t, j, reversed_)] = _gmach(j, t)
            sched[_vjob(j, t, reversed_)] = _gmach(j, t)
        sched[_vjob(j, 1, tv)] = _tmach(j, 1)
        sched[_vjob(j, 2, tv)] = _tmach(j, 1)
        sched[_vjob(j, 3, not tv)] = _tmach(j, 2)
        sched[_vjob(j, 4, not tv)] = _tmach(j, 2)
        sched[_tjob(j, tv)] = _tmach(j, 1)
        sched[_tjob(j, not tv)] = _tmach(j, 2)

    _place_clause_jobs(formula, kappa, slot_config, sched)
    return Schedule(sched)


def extract_assignment_rai(
    out: ReductionOutput, schedule: Schedule
) -> dict[int, bool]:
    """Truth assignment from the highway jobs parked on clause machines."""
    from ..claims import check_claims

    if out.kind != "rai":
        raise ValueError("expected an interval reduction output")
    _require_exact_loads(out, schedule)
    report = check_claims(out, schedule)
    if not report.all_passed:
        failed = ", ".join(c.claim_id for c in report.failures())
        raise SchedError(f"schedule violates structural claims: {failed}")

    n = _num_vars(out)
    on_clause_side: dict[tuple[int, int], bool] = {}
    for job_id, machine_id in schedule.assignment.items():
        jm = out.meta.get(job_id)
        mm = out.meta.get(machine_id)
        if jm is None or mm is None or jm.kind != "HJob" or mm.kind != "CMach":
            continue
        j, t, jp = (int(v) for v in jm.indices)
        if jp == n:
            on_clause_side[(j, t)] = bool(jm.truth_config)
    return {j: on_clause_side[(j, 1)] for j in range(1, n + 1)}
