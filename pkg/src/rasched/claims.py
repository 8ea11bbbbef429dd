"""Structural checks on exact-load schedules of the generated instances.

Each reduction kind has a fixed list of claims a load-T-everywhere schedule
must satisfy (job counts, placement discipline, configuration coherence,
signal propagation, size patterns).  A failing claim always names a concrete
witness machine or job.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import RAIInstance, RARInstance, SchedError, Schedule, evaluate
from .meta import GadgetMeta
from .reductions.base import ALPHA_BETA, CONSERVING_KINDS, ReductionOutput


@dataclass(frozen=True)
class ClaimCheck:
    claim_id: str
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class ClaimReport:
    reduction_kind: str
    checks: tuple[ClaimCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[ClaimCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


class _Ctx:
    def __init__(self, out: ReductionOutput, schedule: Schedule):
        self.out = out
        self.meta = dict(out.meta)
        self.hosted: dict[str, list[str]] = {m: [] for m in out.instance.machines}
        for job_id, machine_id in sorted(schedule.assignment.items()):
            self.hosted[machine_id].append(job_id)
        self.machine_kind = {
            m: self.meta[m].kind if m in self.meta else None
            for m in out.instance.machines
        }
        self.checks: list[ClaimCheck] = []

    def job_meta(self, job_id: str) -> GadgetMeta | None:
        return self.meta.get(job_id)

    def machines_of_kind(self, kind: str) -> list[str]:
        return [m for m in self.out.instance.machines if self.machine_kind[m] == kind]

    def configs_on(self, machine_id: str) -> set[bool]:
        out = set()
        for j in self.hosted[machine_id]:
            info = self.job_meta(j)
            if info is not None and info.truth_config is not None:
                out.add(info.truth_config)
        return out

    def add(self, claim_id: str, passed: bool, witness: str | None = None) -> None:
        self.checks.append(ClaimCheck(claim_id, passed, None if passed else witness))

    def check_all(self, claim_id: str, failures: list[str]) -> None:
        self.add(claim_id, not failures, "; ".join(failures[:3]) if failures else None)


def _clause_kinds_from_meta(ctx: _Ctx) -> dict[int, bool]:
    """Clause index -> True when the clause wants two top slots.

    Recovered from the second clause job's configuration, which is bottom on
    exactly-one clauses and top on exactly-two clauses.
    """
    kinds: dict[int, bool] = {}
    for info in ctx.meta.values():
        if info.kind == "CJob" and int(info.indices[1]) == 2:
            kinds[int(info.indices[0])] = bool(info.truth_config)
    return kinds


def _check_job_counts(ctx: _Ctx, expected) -> None:
    bad = []
    for m in ctx.out.instance.machines:
        want = expected(m)
        have = len(ctx.hosted[m])
        if have != want:
            bad.append(f"{m} has {have} jobs, expected {want}")
    ctx.check_all("job-count-per-machine", bad)


def _check_uniform_config(ctx: _Ctx) -> None:
    bad = [
        f"{m} mixes configurations"
        for m in ctx.out.instance.machines
        if len(ctx.configs_on(m)) > 1
    ]
    ctx.check_all("uniform-config", bad)


def _check_truth_opposition(ctx: _Ctx) -> None:
    by_var: dict[int, dict[int, str]] = {}
    for m in ctx.machines_of_kind("TMach"):
        j, q = (int(v) for v in ctx.meta[m].indices)
        by_var.setdefault(j, {})[q] = m
    bad = []
    for j, pair in sorted(by_var.items()):
        c1 = ctx.configs_on(pair[1])
        c2 = ctx.configs_on(pair[2])
        if c1 & c2:
            bad.append(f"{pair[1]} and {pair[2]} share a configuration")
    ctx.check_all("truth-opposition", bad)


def _check_clause_top_count(ctx: _Ctx, carrier_kind: str) -> None:
    two_in_three = _clause_kinds_from_meta(ctx)
    tops: dict[int, int] = {i: 0 for i in two_in_three}
    for m in ctx.machines_of_kind("CMach"):
        i = int(ctx.meta[m].indices[0])
        for job_id in ctx.hosted[m]:
            info = ctx.job_meta(job_id)
            if info is not None and info.kind == carrier_kind and info.truth_config:
                tops[i] += 1
    bad = []
    for i, count in sorted(tops.items()):
        want = 2 if two_in_three[i] else 1
        if count != want:
            bad.append(f"clause {i} receives {count} top carriers, expected {want}")
    ctx.check_all("clause-top-count", bad)


def _check_pair_split(ctx: _Ctx, host: Schedule) -> None:
    """Configured job pairs occupy the two ends of their eligible run."""
    inst = ctx.out.instance
    assert isinstance(inst, RAIInstance)
    order = inst.order
    pairs: dict[tuple, dict[bool, str]] = {}
    for job in inst.base.jobs:
        info = job.tag
        if info is None or info.truth_config is None:
            continue
        pairs.setdefault((info.kind, info.indices), {})[info.truth_config] = job.id
    first_last_bad: list[str] = []
    split_bad: list[str] = []
    for (kind, indices), members in sorted(pairs.items()):
        if kind == "CJob":
            continue
        lo, hi = inst.interval[members[True]]
        ends = {order[lo - 1], order[hi - 1]}
        placed = {cfg: host.assignment[j] for cfg, j in members.items()}
        for cfg, m in sorted(placed.items()):
            if m not in ends:
                first_last_bad.append(f"{members[cfg]} sits inside its run on {m}")
        if set(placed.values()) != ends:
            split_bad.append(f"{members[True]} / {members[False]} do not split {sorted(ends)}")
    ctx.check_all("first-or-last", first_last_bad)
    ctx.check_all("pair-split", split_bad)


def _check_cjob_placement(ctx: _Ctx) -> None:
    bad = []
    for m in ctx.machines_of_kind("CMach"):
        i = int(ctx.meta[m].indices[0])
        cjobs = [
            j
            for j in ctx.hosted[m]
            if (info := ctx.job_meta(j)) is not None and info.kind == "CJob"
        ]
        if len(cjobs) != 1:
            bad.append(f"{m} hosts {len(cjobs)} clause jobs")
        elif int(ctx.job_meta(cjobs[0]).indices[0]) != i:
            bad.append(f"{m} hosts a clause job of another clause: {cjobs[0]}")
    ctx.check_all("cjob-placement", bad)


def _check_signal(ctx: _Ctx) -> None:
    """The variable job kept home agrees with the highway job at the clause."""
    home: dict[tuple[int, int], bool] = {}
    arrived: dict[tuple[int, int], bool] = {}
    for m in ctx.out.instance.machines:
        mk = ctx.machine_kind[m]
        for job_id in ctx.hosted[m]:
            info = ctx.job_meta(job_id)
            if info is None or info.truth_config is None:
                continue
            if info.kind == "VJob" and mk == "TMach":
                j, t = (int(v) for v in info.indices)
                home[(j, t)] = info.truth_config
            elif info.kind == "HJob" and mk == "CMach":
                j, t, _ = (int(v) for v in info.indices)
                arrived[(j, t)] = info.truth_config
    bad = []
    for key in sorted(home):
        if key not in arrived:
            bad.append(f"occurrence {key} has no highway job at a clause machine")
        elif home[key] != arrived[key]:
            bad.append(f"occurrence {key} flips between truth and clause machine")
    ctx.check_all("signal-propagation", bad)


def _check_simple_composition(ctx: _Ctx) -> None:
    bad = []
    for m in ctx.out.instance.machines:
        kinds = sorted(
            ctx.job_meta(j).kind if ctx.job_meta(j) else "?" for j in ctx.hosted[m]
        )
        if ctx.machine_kind[m] == "TMach":
            want = ["TJob", "VJob", "VJob"]
        else:
            want = ["CJob", "PrivateLoad", "VJob"]
        if kinds != want:
            bad.append(f"{m} hosts {kinds}")
    ctx.check_all("machine-composition", bad)


def _check_triple_pattern(ctx: _Ctx) -> None:
    inst = ctx.out.instance
    assert isinstance(inst, RARInstance)
    size = {j.id: j.size for j in inst.jobs}
    alpha = tuple(sorted((ALPHA_BETA.alpha_a, ALPHA_BETA.alpha_b, ALPHA_BETA.alpha_c)))
    beta = tuple(sorted((ALPHA_BETA.beta_a, ALPHA_BETA.beta_b, ALPHA_BETA.beta_c)))
    bad = []
    for m in inst.machines:
        sizes = tuple(sorted(int(size[j]) for j in ctx.hosted[m]))
        if sizes not in (alpha, beta):
            bad.append(f"{m} receives sizes {sizes}")
    ctx.check_all("triple-pattern", bad)


def _check_lst_pattern(ctx: _Ctx) -> None:
    bad = []
    for m in ctx.out.instance.machines:
        kinds = sorted(
            ctx.job_meta(j).kind if ctx.job_meta(j) else "?" for j in ctx.hosted[m]
        )
        if kinds not in (["DummyJob"], ["ElementJob", "ElementJob"]):
            bad.append(f"{m} hosts {kinds}")
    ctx.check_all("dummy-or-two-elements", bad)


def check_claims(out: ReductionOutput, schedule: Schedule) -> ClaimReport:
    """Evaluate every structural claim applicable to the reduction kind.

    Requires all machine loads to equal the target for the conserving
    reductions; reduction kinds without structural claims yield an empty
    report.
    """
    if out.kind in CONSERVING_KINDS:
        profile = evaluate(out.instance, schedule)
        off = sorted(m for m, v in profile.loads.items() if v != Fraction(out.target))
        if off:
            raise SchedError(
                f"claim checking requires exact loads; off target: {', '.join(off)}"
            )

    ctx = _Ctx(out, schedule)
    if out.kind == "simple":
        _check_job_counts(ctx, lambda m: 3)
        _check_simple_composition(ctx)
        _check_uniform_config(ctx)
        _check_truth_opposition(ctx)
        _check_clause_top_count(ctx, "VJob")
    elif out.kind == "rai":
        _check_job_counts(
            ctx, lambda m: 4 if ctx.machine_kind[m] == "TMach" else 3
        )
        _check_pair_split(ctx, schedule)
        _check_cjob_placement(ctx)
        _check_uniform_config(ctx)
        _check_truth_opposition(ctx)
        _check_clause_top_count(ctx, "HJob")
        _check_signal(ctx)
    elif out.kind in ("rar3", "rar2"):
        _check_job_counts(ctx, lambda m: 3)
        _check_triple_pattern(ctx)
    elif out.kind == "lst":
        _check_lst_pattern(ctx)
    return ClaimReport(out.kind, tuple(ctx.checks))
