"""Exact decision procedures for makespan, exact-load and min-load targets.

The engine is a backtracking search over job assignments with unit
propagation, fail-first branching on the job with the fewest feasible
machines, and, for exact-load questions, branching over the few exact
completions of the most constrained machine.  On instances whose sizes were
built digit by digit it switches to carry-free digit reasoning, which is
what makes the ten-digit interval instances tractable.  Every reported
schedule is re-validated through :func:`rasched.core.evaluate` before being
returned; a budget exhaustion is a first-class outcome distinct from a
proven "no schedule exists".
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import (
    Instance,
    LRSInstance,
    RAIInstance,
    RAInstance,
    RARInstance,
    SchedError,
    Schedule,
    as_rational,
    digits,
    evaluate,
    to_restricted_assignment,
    total_size_check,
)


class Verdict(Enum):
    FOUND = "FOUND"
    NONE = "NONE"
    BUDGET = "BUDGET"


@dataclass(frozen=True)
class SolveBudget:
    """Caps on search effort; exceeding one yields the BUDGET verdict."""

    max_nodes: int = 20_000_000
    max_seconds: float | None = None
    max_schedules: int = 10_000

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_schedules <= 0:
            raise ValueError("budget caps must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = SolveBudget()


@dataclass(frozen=True)
class SolveResult:
    verdict: Verdict
    schedule: Schedule | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.verdict is Verdict.FOUND


class _BudgetHit(Exception):
    pass


class _Stop(Exception):
    """Enumeration reached its schedule cap."""


_COMPLETION_LIMIT = 6
_COMPLETION_STEPS = 400
_COMPLETION_CANDS = 16


def _as_ra(instance: Instance) -> RAInstance:
    if isinstance(instance, RAInstance):
        return instance
    if isinstance(instance, RAIInstance):
        return instance.base
    if isinstance(instance, RARInstance):
        return to_restricted_assignment(instance)
    if isinstance(instance, LRSInstance):
        raise TypeError("low rank instances have machine dependent sizes")
    raise TypeError(f"not an instance: {instance!r}")


class _Engine:
    """One search run over an integer-scaled restricted assignment instance.

    Modes: "exact" wants every load equal to the target, "cap" wants loads at
    most the target, "min" wants loads at least the target.
    """

    def __init__(
        self,
        ra: RAInstance,
        target: Fraction,
        mode: str,
        budget: SolveBudget,
        forced: tuple[tuple[str, str], ...] = (),
        collect_cap: int | None = None,
    ):
        self.mode = mode
        self.budget = budget
        self.machines = list(ra.machines)
        self.job_ids = [j.id for j in ra.jobs]
        m, n = len(self.machines), len(self.job_ids)
        self.m, self.n = m, n

        scale = math.lcm(
            target.denominator, *(j.size.denominator for j in ra.jobs), 1
        )
        self.T = int(target * scale)
        self.sizes = [int(j.size * scale) for j in ra.jobs]
        self.total = sum(self.sizes)

        mach_index = {mid: k for k, mid in enumerate(self.machines)}
        self.elig = [
            tuple(sorted(mach_index[mm] for mm in ra.eligible[j.id])) for j in ra.jobs
        ]
        self.mach_jobs: list[list[int]] = [[] for _ in range(m)]
        for j in range(n):
            for i in self.elig[j]:
                self.mach_jobs[i].append(j)

        # Interchangeable jobs: same size, same eligible set, same role kind.
        group_key: dict[tuple, int] = {}
        self.group_of = [0] * n
        self.group_members: list[list[int]] = []
        for j, job in enumerate(ra.jobs):
            kind = job.tag.kind if job.tag is not None else None
            key = (self.sizes[j], self.elig[j], kind)
            g = group_key.get(key)
            if g is None:
                g = len(self.group_members)
                group_key[key] = g
                self.group_members.append([])
            group_key[key] = g
            self.group_of[j] = g
            self.group_members[g].append(j)

        # Machines that are indistinguishable at the root (same candidate
        # jobs); used for value dedup in cap and min mode.
        sig_key: dict[tuple, int] = {}
        self.mach_sig = [0] * m
        for i in range(m):
            key = tuple(self.mach_jobs[i])
            self.mach_sig[i] = sig_key.setdefault(key, len(sig_key))

        self.digit_mode = False
        self.width = 0
        self.size_digits: list[tuple[int, ...]] = []
        self.t_digits: tuple[int, ...] = ()
        if mode == "exact" or (mode == "cap" and self.total == m * self.T):
            self._setup_digits()

        self.load = [0] * m
        self.assigned = [-1] * n
        self.unassigned = set(range(n))
        self.trail: list[int] = []
        self.nodes = 0
        self.deadline = (
            time.monotonic() + budget.max_seconds if budget.max_seconds else None
        )
        self.collect_cap = collect_cap
        self.collected: set[tuple[tuple[str, str], ...]] = set()
        self.first_solution: list[tuple[str, str]] | None = None
        # Dead-end cache for the cap and min modes: a state is determined by
        # the unassigned job set and the load vector, so a failed state never
        # needs re-exploring.  The exact mode never revisits states.
        self.failed: set[tuple] | None = (
            set() if mode in ("cap", "min") and collect_cap is None else None
        )

        self.init_conflict = False
        for job_id, machine_id in forced:
            j = self.job_ids.index(job_id)
            i = mach_index[machine_id]
            if i not in self.elig[j] or not self._fits(j, i):
                self.init_conflict = True
                return
            self._assign(j, i)

    # -- digit reasoning -------------------------------------------------

    def _setup_digits(self) -> None:
        """Enable carry-free digit pruning when provably safe.

        Safe when at most k items can share a machine under the load cap and
        k times the largest size digit stays below 10; then loads of feasible
        states always add digit by digit, so a job fits a machine only if
        every size digit is at most the corresponding residual digit.
        """
        if self.T <= 0 or not self.sizes:
            return
        width = len(str(self.T))
        if any(s > 0 and len(str(s)) > width for s in self.sizes):
            return
        dmax = max((max(digits(s)) for s in self.sizes), default=0)
        if dmax == 0:
            return
        single_count = [0] * self.m
        single_sum = [0] * self.m
        nonsingle = []
        for j in range(self.n):
            if len(self.elig[j]) == 1:
                i = self.elig[j][0]
                single_count[i] += 1
                single_sum[i] += self.sizes[j]
            else:
                nonsingle.append(self.sizes[j])
        nonsingle.sort()
        prefix = [0]
        for s in nonsingle:
            prefix.append(prefix[-1] + s)
        kmax = 0
        for i in range(self.m):
            room = self.T - single_sum[i]
            k = 0
            while k < len(nonsingle) and prefix[k + 1] <= room:
                k += 1
            kmax = max(kmax, single_count[i] + k)
        if kmax * dmax > 9:
            return
        self.digit_mode = True
        self.width = width
        self.t_digits = digits(self.T, width)
        self.size_digits = [digits(s, width) for s in self.sizes]

    def _resid_digits(self, i: int) -> tuple[int, ...]:
        return digits(self.T - self.load[i], self.width)

    # -- state -----------------------------------------------------------

    def _fits(self, j: int, i: int) -> bool:
        if self.mode == "min":
            return True
        resid = self.T - self.load[i]
        if self.sizes[j] > resid:
            return False
        if self.digit_mode:
            rd = self._resid_digits(i)
            sd = self.size_digits[j]
            return all(a <= b for a, b in zip(sd, rd))
        return True

    def _assign(self, j: int, i: int) -> None:
        self.assigned[j] = i
        self.load[i] += self.sizes[j]
        self.unassigned.discard(j)
        self.trail.append(j)
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetHit
        if self.deadline is not None and self.nodes % 1024 == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetHit

    def _undo_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            j = self.trail.pop()
            i = self.assigned[j]
            self.assigned[j] = -1
            self.load[i] -= self.sizes[j]
            self.unassigned.add(j)

    def _feasible_machines(self, j: int) -> list[int]:
        return [i for i in self.elig[j] if self._fits(j, i)]

    # -- propagation -----------------------------------------------------

    def _propagate(self) -> bool:
        """Forced moves to fixpoint; False on a proven dead end."""
        while True:
            changed = False
            for j in sorted(self.unassigned):
                feas = self._feasible_machines(j)
                if not feas:
                    return False
                if len(feas) == 1:
                    self._assign(j, feas[0])
                    changed = True
            if self.mode == "exact":
                for i in range(self.m):
                    resid = self.T - self.load[i]
                    if resid == 0:
                        continue
                    if resid < 0:
                        return False
                    cands = [
                        j
                        for j in self.mach_jobs[i]
                        if self.assigned[j] < 0 and self._fits(j, i)
                    ]
                    if not cands or sum(self.sizes[j] for j in cands) < resid:
                        return False
            elif self.mode == "cap":
                slack = sum(self.T - self.load[i] for i in range(self.m))
                if slack < sum(self.sizes[j] for j in self.unassigned):
                    return False
            else:
                remaining = sum(self.sizes[j] for j in self.unassigned)
                deficit = sum(max(0, self.T - self.load[i]) for i in range(self.m))
                if remaining < deficit:
                    return False
                for i in range(self.m):
                    need = self.T - self.load[i]
                    if need <= 0:
                        continue
                    avail = sum(
                        self.sizes[j]
                        for j in self.mach_jobs[i]
                        if self.assigned[j] < 0
                    )
                    if avail < need:
                        return False
            if not changed:
                return True

    # -- exact completions -----------------------------------------------

    def _completions(self, i: int, limit: int) -> list[tuple[int, ...]] | None:
        """Up to ``limit`` exact fillings of machine i, or None if too costly.

        Candidates are compressed by interchange group; each chosen group
        contributes its lowest-indexed unassigned members, so the list covers
        every filling up to interchange of identical jobs.
        """
        resid = self.T - self.load[i]
        cands = [
            j
            for j in self.mach_jobs[i]
            if self.assigned[j] < 0 and self.sizes[j] > 0 and self._fits(j, i)
        ]
        if len(cands) > _COMPLETION_CANDS:
            return None
        by_group: dict[int, list[int]] = {}
        for j in cands:
            by_group.setdefault(self.group_of[j], []).append(j)
        groups = sorted(
            ((self.sizes[members[0]], sorted(members)) for members in by_group.values()),
            key=lambda t: (-t[0], t[1][0]),
        )
        suffix = [0] * (len(groups) + 1)
        for k in range(len(groups) - 1, -1, -1):
            size, members = groups[k]
            suffix[k] = suffix[k + 1] + size * len(members)

        out: list[tuple[int, ...]] = []
        steps = 0

        def dfs(k: int, remaining: int, chosen: list[int]) -> bool:
            nonlocal steps
            steps += 1
            if steps > _COMPLETION_STEPS:
                return False
            if remaining == 0:
                out.append(tuple(chosen))
                return len(out) <= limit
            if k == len(groups) or suffix[k] < remaining:
                return True
            size, members = groups[k]
            top = min(len(members), remaining // size)
            for count in range(top, -1, -1):
                if not dfs(k + 1, remaining - count * size, chosen + members[:count]):
                    return False
            return True

        ok = dfs(0, resid, [])
        if not ok and len(out) > limit:
            return None
        if steps > _COMPLETION_STEPS:
            return None
        if self.digit_mode:
            rd = self._resid_digits(i)
            out = [
                c
                for c in out
                if all(
                    col <= 9
                    for col in (
                        sum(self.size_digits[j][d] for j in c) for d in range(self.width)
                    )
                )
                and tuple(
                    sum(self.size_digits[j][d] for j in c) for d in range(self.width)
                )
                == rd
            ]
        return out

    # -- search ----------------------------------------------------------

    def _on_solution(self) -> bool:
        """Record the current assignment; True if the search should stop."""
        if self.mode == "min" and any(self.load[i] < self.T for i in range(self.m)):
            return False
        pairs = self._canonical_pairs()
        if self.collect_cap is None:
            self.first_solution = list(pairs)
            return True
        self.collected.add(pairs)
        if len(self.collected) >= self.collect_cap:
            raise _Stop
        return False

    def _canonical_pairs(self) -> tuple[tuple[str, str], ...]:
        """Assignment with each interchange group relabeled canonically."""
        asg = list(self.assigned)
        for members in self.group_members:
            slots = sorted(asg[j] for j in members)
            for j, i in zip(members, slots):
                asg[j] = i
        return tuple(
            (self.job_ids[j], self.machines[asg[j]]) for j in range(self.n)
        )

    def _select_branch(self):
        """(kind, payload) for the most constrained decision point."""
        best_j = -1
        best_feas: list[int] = []
        for j in sorted(self.unassigned):
            feas = self._feasible_machines(j)
            if best_j < 0 or (len(feas), -self.sizes[j], j) < (
                len(best_feas),
                -self.sizes[best_j],
                best_j,
            ):
                best_j, best_feas = j, feas
        if self.mode != "exact":
            if self.mode == "cap":
                seen = set()
                deduped = []
                for i in best_feas:
                    key = (self.load[i], self.mach_sig[i])
                    if key not in seen:
                        seen.add(key)
                        deduped.append(i)
                best_feas = deduped
            else:
                best_feas = sorted(
                    best_feas, key=lambda i: (self.load[i] >= self.T, i)
                )
                seen = set()
                deduped = []
                for i in best_feas:
                    key = (self.load[i], self.mach_sig[i])
                    if key not in seen:
                        seen.add(key)
                        deduped.append(i)
                best_feas = deduped
            return "job", (best_j, best_feas)

        # Exact mode: also consider filling one machine outright.
        limit = min(_COMPLETION_LIMIT, max(len(best_feas), 1))
        best_i = -1
        best_fillings: list[tuple[int, ...]] | None = None
        for i in range(self.m):
            if self.load[i] >= self.T:
                continue
            fillings = self._completions(i, limit)
            if fillings is None:
                continue
            if not fillings:
                return "conflict", None
            if best_fillings is None or len(fillings) < len(best_fillings):
                best_i, best_fillings = i, fillings
                if len(fillings) == 1:
                    break
        if best_fillings is not None and len(best_fillings) < len(best_feas):
            return "machine", (best_i, best_fillings)
        # Branch the lowest-indexed unassigned member of the group, which is
        # interchangeable with the selected job.
        rep = next(
            j for j in self.group_members[self.group_of[best_j]] if self.assigned[j] < 0
        )
        return "job", (rep, best_feas)

    def _search(self) -> bool:
        if not self._propagate():
            return False
        if not self.unassigned:
            return self._on_solution()
        state = None
        if self.failed is not None:
            state = (tuple(sorted(self.unassigned)), tuple(self.load))
            if state in self.failed:
                return False
        kind, payload = self._select_branch()
        if kind == "conflict":
            return False
        if kind == "machine":
            _, fillings = payload
            for filling in fillings:
                mark = len(self.trail)
                i = payload[0]
                ok = True
                for j in filling:
                    if self._fits(j, i):
                        self._assign(j, i)
                    else:
                        ok = False
                        break
                if ok and self._search():
                    return True
                self._undo_to(mark)
            return False
        j, feas = payload
        for i in feas:
            mark = len(self.trail)
            self._assign(j, i)
            if self._search():
                return True
            self._undo_to(mark)
        if state is not None and len(self.failed) < 2_000_000:
            self.failed.add(state)
        return False

    def run(self) -> tuple[Verdict, list[tuple[str, str]] | None]:
        if self.init_conflict:
            return Verdict.NONE, None
        if self.mode == "exact" and self.total != self.m * self.T:
            return Verdict.NONE, None
        if self.m == 0:
            if self.n == 0:
                return Verdict.FOUND, []
            return Verdict.NONE, None
        try:
            if self._search():
                return Verdict.FOUND, self.first_solution
            return Verdict.NONE, None
        except _Stop:
            return Verdict.FOUND, None
        except _BudgetHit:
            return Verdict.BUDGET, None


def _check_found(
    instance: Instance, ra: RAInstance, target: Fraction, mode: str, pairs
) -> Schedule:
    """Independent re-validation of a schedule produced by the search."""
    schedule = Schedule(dict(pairs))
    profile = evaluate(ra, schedule)
    if mode == "exact" and any(v != target for v in profile.loads.values()):
        raise SchedError("internal error: exact-load schedule failed validation")
    if mode == "cap" and profile.makespan > target:
        raise SchedError("internal error: makespan schedule failed validation")
    if mode == "min" and profile.min_load < target:
        raise SchedError("internal error: min-load schedule failed validation")
    return schedule


def _run_single(
    ra: RAInstance,
    target: Fraction,
    mode: str,
    budget: SolveBudget,
    forced: tuple[tuple[str, str], ...] = (),
) -> tuple[Verdict, list | None, int]:
    engine = _Engine(ra, target, mode, budget, forced=forced)
    verdict, pairs = engine.run()
    return verdict, pairs, engine.nodes


def _worker(args) -> tuple[str, list | None, int]:
    ra, target, mode, budget, forced = args
    verdict, pairs, nodes = _run_single(ra, target, mode, budget, forced)
    return verdict.value, pairs, nodes


def _decide(
    instance: Instance,
    target: Fraction,
    mode: str,
    budget: SolveBudget,
    workers: int,
) -> SolveResult:
    ra = _as_ra(instance)
    if workers <= 1 or not ra.jobs:
        verdict, pairs, nodes = _run_single(ra, target, mode, budget)
        schedule = (
            _check_found(instance, ra, target, mode, pairs)
            if verdict is Verdict.FOUND
            else None
        )
        return SolveResult(verdict, schedule, nodes)

    # Split the root decision across workers; children are examined in
    # branch order so the result does not depend on completion timing.
    probe = _Engine(ra, target, mode, SolveBudget(max_nodes=budget.max_nodes))
    if probe.init_conflict or (
        mode == "exact" and probe.total != probe.m * probe.T
    ):
        return SolveResult(Verdict.NONE, None, 0)
    try:
        if not probe._propagate():
            return SolveResult(Verdict.NONE, None, probe.nodes)
    except _BudgetHit:
        return SolveResult(Verdict.BUDGET, None, probe.nodes)
    if not probe.unassigned:
        pairs = probe._canonical_pairs()
        return SolveResult(
            Verdict.FOUND, _check_found(instance, ra, target, mode, pairs), probe.nodes
        )
    j = min(
        probe.unassigned,
        key=lambda j: (len(probe._feasible_machines(j)), -probe.sizes[j], j),
    )
    feas = probe._feasible_machines(j)
    if not feas:
        return SolveResult(Verdict.NONE, None, probe.nodes)
    tasks = [
        (ra, target, mode, budget, ((ra.jobs[j].id, ra.machines[i]),)) for i in feas
    ]
    total_nodes = probe.nodes
    budget_hit = False
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_worker, t) for t in tasks]
        outcome: tuple[Verdict, list | None] | None = None
        for fut in futures:
            verdict_value, pairs, nodes = fut.result()
            total_nodes += nodes
            verdict = Verdict(verdict_value)
            if verdict is Verdict.FOUND and outcome is None:
                outcome = (verdict, pairs)
            elif verdict is Verdict.BUDGET:
                budget_hit = True
    if outcome is not None:
        verdict, pairs = outcome
        return SolveResult(
            verdict, _check_found(instance, ra, target, mode, pairs), total_nodes
        )
    if budget_hit:
        return SolveResult(Verdict.BUDGET, None, total_nodes)
    return SolveResult(Verdict.NONE, None, total_nodes)


def decide_makespan(
    instance: Instance,
    target: Fraction | int,
    budget: SolveBudget = DEFAULT_BUDGET,
    workers: int = 1,
) -> SolveResult:
    """Is there an eligibility-respecting schedule with makespan at most T?"""
    target = as_rational(target)
    if target < 0:
        raise ValueError("target must be nonnegative")
    return _decide(instance, target, "cap", budget, workers)


def decide_exact_load(
    instance: Instance,
    target: Fraction | int,
    budget: SolveBudget = DEFAULT_BUDGET,
    workers: int = 1,
) -> SolveResult:
    """Is there a schedule loading every machine to exactly T?

    Requires the sizes to sum to |machines| * T, the shape all conserving
    reductions guarantee.
    """
    target = as_rational(target)
    ra = _as_ra(instance)
    if not total_size_check(ra, target):
        raise ValueError("job sizes do not sum to |machines| * target")
    return _decide(ra, target, "exact", budget, workers)


def decide_min_load(
    instance: Instance,
    target: Fraction | int,
    budget: SolveBudget = DEFAULT_BUDGET,
    workers: int = 1,
) -> SolveResult:
    """Is there a schedule in which every machine receives load at least T?

    When the sizes sum to exactly |machines| * T this coincides with the
    exact-load question (a machine below T forces another above T) and is
    decided through the exact engine.
    """
    target = as_rational(target)
    ra = _as_ra(instance)
    if target >= 0 and total_size_check(ra, target):
        return _decide(ra, target, "exact", budget, workers)
    return _decide(ra, target, "min", budget, workers)


def enumerate_exact(
    instance: Instance,
    target: Fraction | int,
    cap: int | None = None,
    budget: SolveBudget = DEFAULT_BUDGET,
) -> tuple[list[Schedule], bool]:
    """All exact-load schedules up to ``cap``, plus a completeness flag.

    Schedules are counted up to interchange of identical jobs and returned
    in canonical order.  The flag is True only if the search space was
    exhausted within the caps.
    """
    target = as_rational(target)
    ra = _as_ra(instance)
    if not total_size_check(ra, target):
        raise ValueError("job sizes do not sum to |machines| * target")
    cap = cap if cap is not None else budget.max_schedules
    engine = _Engine(ra, target, "exact", budget, collect_cap=cap)
    complete = True
    if engine.m == 0:
        return ([Schedule({})] if engine.n == 0 else []), True
    try:
        engine._search()
    except _Stop:
        complete = False
    except _BudgetHit:
        complete = False
    schedules = [Schedule(dict(pairs)) for pairs in sorted(engine.collected)]
    for s in schedules:
        profile = evaluate(ra, s)
        if any(v != target for v in profile.loads.values()):
            raise SchedError("internal error: enumerated schedule failed validation")
    return schedules, complete
