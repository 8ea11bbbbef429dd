"""Instance and schedule data model with exact rational arithmetic.

All quantities (sizes, capacities, demands, speeds, loads) are
:class:`fractions.Fraction` values; there is no floating point anywhere in
the package.  Eligibility is always an explicit relation, never a sentinel
processing time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .meta import GadgetMeta

Rational = Fraction


class SchedError(Exception):
    """Base class for errors raised by this package."""


class UnknownIdError(SchedError):
    """A job or machine id that does not belong to the instance."""


class UnschedulableJobError(SchedError):
    """Jobs whose eligible machine set is empty."""

    def __init__(self, job_ids: Sequence[str]):
        self.job_ids = tuple(job_ids)
        super().__init__(f"jobs with no eligible machine: {', '.join(self.job_ids)}")


class IneligibleAssignmentError(SchedError):
    """A schedule that places jobs on machines they are not eligible for."""

    def __init__(self, pairs: Sequence[tuple[str, str]]):
        self.pairs = tuple(pairs)
        listing = ", ".join(f"{j}->{m}" for j, m in self.pairs)
        super().__init__(f"ineligible assignments: {listing}")


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce ints, fractions and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class Job:
    """A job with an opaque id, a nonnegative exact size and an optional tag."""

    id: str
    size: Fraction
    tag: GadgetMeta | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "size", as_rational(self.size))
        if self.size < 0:
            raise ValueError(f"job {self.id}: negative size {self.size}")


def _check_ids(kind: str, ids: Iterable[str]) -> tuple[str, ...]:
    out = tuple(ids)
    seen = set()
    for i in out:
        if not i or any(c.isspace() for c in i):
            raise ValueError(f"bad {kind} id: {i!r}")
        if i in seen:
            raise ValueError(f"duplicate {kind} id: {i!r}")
        seen.add(i)
    return out


@dataclass(frozen=True)
class RAInstance:
    """Restricted assignment: each job may run only on its eligible machines.

    Private loads are ordinary jobs whose eligible set is a singleton, so
    solvers and size accounting treat them uniformly.
    """

    machines: tuple[str, ...]
    jobs: tuple[Job, ...]
    eligible: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        machines = _check_ids("machine", self.machines)
        object.__setattr__(self, "machines", machines)
        jobs = tuple(self.jobs)
        _check_ids("job", (j.id for j in jobs))
        object.__setattr__(self, "jobs", jobs)
        mset = set(machines)
        elig = {j: frozenset(ms) for j, ms in dict(self.eligible).items()}
        for job in jobs:
            ms = elig.get(job.id)
            if ms is None:
                raise ValueError(f"job {job.id}: no eligible set given")
            if not ms:
                raise UnschedulableJobError([job.id])
            if not ms <= mset:
                raise ValueError(f"job {job.id}: eligible set not within machines")
        object.__setattr__(self, "eligible", elig)

    def job(self, job_id: str) -> Job:
        for j in self.jobs:
            if j.id == job_id:
                return j
        raise UnknownIdError(f"unknown job: {job_id}")

    def total_size(self) -> Fraction:
        return sum((j.size for j in self.jobs), Fraction(0))

    def private_jobs(self) -> tuple[Job, ...]:
        """Jobs forced onto a single machine."""
        return tuple(j for j in self.jobs if len(self.eligible[j.id]) == 1)


@dataclass(frozen=True)
class RAIInstance:
    """Restricted assignment with interval restrictions.

    The machines are totally ordered by ``order`` and every eligible set is
    the contiguous run ``order[l-1 : r]`` recorded in ``interval`` (1-based,
    inclusive).
    """

    base: RAInstance
    order: tuple[str, ...]
    interval: Mapping[str, tuple[int, int]]

    def __post_init__(self) -> None:
        order = tuple(self.order)
        if sorted(order) != sorted(self.base.machines):
            raise ValueError("order is not a permutation of the machines")
        object.__setattr__(self, "order", order)
        iv = dict(self.interval)
        m = len(order)
        for job in self.base.jobs:
            if job.id not in iv:
                raise ValueError(f"job {job.id}: no interval given")
            lo, hi = iv[job.id]
            if not (1 <= lo <= hi <= m):
                raise ValueError(f"job {job.id}: bad interval ({lo},{hi})")
            if frozenset(order[lo - 1 : hi]) != self.base.eligible[job.id]:
                raise ValueError(f"job {job.id}: eligible set is not the interval")
        object.__setattr__(self, "interval", iv)

    @property
    def machines(self) -> tuple[str, ...]:
        return self.base.machines

    @property
    def jobs(self) -> tuple[Job, ...]:
        return self.base.jobs

    @property
    def eligible(self) -> Mapping[str, frozenset[str]]:
        return self.base.eligible

    def total_size(self) -> Fraction:
        return self.base.total_size()


@dataclass(frozen=True)
class RARInstance:
    """Restricted assignment with resource restrictions.

    A job is eligible on a machine iff its demand vector is component-wise at
    most the machine's capacity vector.
    """

    resource_count: int
    machines: tuple[str, ...]
    capacities: Mapping[str, tuple[Fraction, ...]]
    jobs: tuple[Job, ...]
    demands: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        if self.resource_count < 0:
            raise ValueError("negative resource count")
        machines = _check_ids("machine", self.machines)
        object.__setattr__(self, "machines", machines)
        jobs = tuple(self.jobs)
        _check_ids("job", (j.id for j in jobs))
        object.__setattr__(self, "jobs", jobs)
        caps = {
            m: tuple(as_rational(c) for c in cs) for m, cs in dict(self.capacities).items()
        }
        dems = {j: tuple(as_rational(d) for d in ds) for j, ds in dict(self.demands).items()}
        for m in machines:
            if m not in caps:
                raise ValueError(f"machine {m}: no capacity vector")
            if len(caps[m]) != self.resource_count:
                raise ValueError(f"machine {m}: capacity vector has wrong length")
        for job in jobs:
            if job.id not in dems:
                raise ValueError(f"job {job.id}: no demand vector")
            if len(dems[job.id]) != self.resource_count:
                raise ValueError(f"job {job.id}: demand vector has wrong length")
        object.__setattr__(self, "capacities", caps)
        object.__setattr__(self, "demands", dems)

    def total_size(self) -> Fraction:
        return sum((j.size for j in self.jobs), Fraction(0))


@dataclass(frozen=True)
class LRSInstance:
    """Low rank unrelated scheduling: p(i, j) is a size/speed inner product."""

    dimension: int
    machines: tuple[str, ...]
    speeds: Mapping[str, tuple[Fraction, ...]]
    jobs: tuple[str, ...]
    sizes: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        machines = _check_ids("machine", self.machines)
        jobs = _check_ids("job", self.jobs)
        object.__setattr__(self, "machines", machines)
        object.__setattr__(self, "jobs", jobs)
        spd = {m: tuple(as_rational(v) for v in vs) for m, vs in dict(self.speeds).items()}
        siz = {j: tuple(as_rational(s) for s in ss) for j, ss in dict(self.sizes).items()}
        for m in machines:
            vec = spd.get(m)
            if vec is None or len(vec) != self.dimension:
                raise ValueError(f"machine {m}: bad speed vector")
            if any(v < 0 for v in vec):
                raise ValueError(f"machine {m}: negative speed entry")
        for j in jobs:
            vec = siz.get(j)
            if vec is None or len(vec) != self.dimension:
                raise ValueError(f"job {j}: bad size vector")
            if any(s < 0 for s in vec):
                raise ValueError(f"job {j}: negative size entry")
        object.__setattr__(self, "speeds", spd)
        object.__setattr__(self, "sizes", siz)


Instance = Union[RAInstance, RAIInstance, RARInstance, LRSInstance]


@dataclass
class Schedule:
    """A total assignment of jobs to machines."""

    assignment: dict[str, str]

    def items(self) -> list[tuple[str, str]]:
        return sorted(self.assignment.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Schedule) and self.assignment == other.assignment


@dataclass(frozen=True)
class LoadProfile:
    """Per-machine loads with the derived makespan and minimum load."""

    loads: Mapping[str, Fraction]
    makespan: Fraction
    min_load: Fraction


def eligibility(rar: RARInstance, job_id: str, machine_id: str) -> bool:
    """Demand at most capacity in every resource."""
    if job_id not in rar.demands:
        raise UnknownIdError(f"unknown job: {job_id}")
    if machine_id not in rar.capacities:
        raise UnknownIdError(f"unknown machine: {machine_id}")
    demand = rar.demands[job_id]
    cap = rar.capacities[machine_id]
    return all(d <= c for d, c in zip(demand, cap))


def eligible_set(instance: Instance, job_id: str) -> frozenset[str]:
    """The set of machines a job may run on, for any instance flavour."""
    if isinstance(instance, (RAInstance, RAIInstance)):
        try:
            return instance.eligible[job_id]
        except KeyError:
            raise UnknownIdError(f"unknown job: {job_id}") from None
    if isinstance(instance, RARInstance):
        return frozenset(
            m for m in instance.machines if eligibility(instance, job_id, m)
        )
    if isinstance(instance, LRSInstance):
        if job_id not in instance.sizes:
            raise UnknownIdError(f"unknown job: {job_id}")
        return frozenset(instance.machines)
    raise TypeError(f"not an instance: {instance!r}")


def to_restricted_assignment(rar: RARInstance) -> RAInstance:
    """Materialize the eligibility relation of a resource-restricted instance.

    Jobs whose demand fits no machine are reported via
    :class:`UnschedulableJobError` rather than silently dropped.
    """
    elig: dict[str, frozenset[str]] = {}
    empty: list[str] = []
    for job in rar.jobs:
        ms = eligible_set(rar, job.id)
        if not ms:
            empty.append(job.id)
        elig[job.id] = ms
    if empty:
        raise UnschedulableJobError(empty)
    return RAInstance(machines=rar.machines, jobs=rar.jobs, eligible=elig)


def lrs_processing_time(lrs: LRSInstance, job_id: str, machine_id: str) -> Fraction:
    """Exact inner product of the job size and machine speed vectors."""
    if job_id not in lrs.sizes:
        raise UnknownIdError(f"unknown job: {job_id}")
    if machine_id not in lrs.speeds:
        raise UnknownIdError(f"unknown machine: {machine_id}")
    s = lrs.sizes[job_id]
    v = lrs.speeds[machine_id]
    return sum((a * b for a, b in zip(s, v)), Fraction(0))


def evaluate(instance: Instance, schedule: Schedule) -> LoadProfile:
    """Per-machine loads of a total, eligibility-respecting schedule.

    Raises :class:`IneligibleAssignmentError` listing every offending
    job/machine pair, and :class:`SchedError` if the schedule is not total.
    """
    if isinstance(instance, RAIInstance):
        return evaluate(instance.base, schedule)

    if isinstance(instance, LRSInstance):
        job_ids: Sequence[str] = instance.jobs
    else:
        job_ids = [j.id for j in instance.jobs]

    asg = schedule.assignment
    missing = [j for j in job_ids if j not in asg]
    if missing:
        raise SchedError(f"schedule is not total, unassigned: {', '.join(missing)}")
    unknown = [j for j in asg if j not in set(job_ids)]
    if unknown:
        raise UnknownIdError(f"unknown jobs in schedule: {', '.join(unknown)}")

    machines = set(instance.machines)
    loads: dict[str, Fraction] = {m: Fraction(0) for m in instance.machines}
    bad: list[tuple[str, str]] = []

    if isinstance(instance, LRSInstance):
        for j in job_ids:
            m = asg[j]
            if m not in machines:
                raise UnknownIdError(f"unknown machine: {m}")
            loads[m] += lrs_processing_time(instance, j, m)
    else:
        size = {j.id: j.size for j in instance.jobs}
        for j in job_ids:
            m = asg[j]
            if m not in machines:
                raise UnknownIdError(f"unknown machine: {m}")
            if m not in eligible_set(instance, j):
                bad.append((j, m))
            loads[m] += size[j]
        if bad:
            raise IneligibleAssignmentError(sorted(bad))

    values = list(loads.values())
    makespan = max(values) if values else Fraction(0)
    min_load = min(values) if values else Fraction(0)
    return LoadProfile(loads=loads, makespan=makespan, min_load=min_load)


def is_interval(ra: RAInstance, order: Sequence[str]) -> bool:
    """Whether every eligible set is contiguous under the given machine order."""
    order = tuple(order)
    if sorted(order) != sorted(ra.machines):
        raise ValueError("order is not a permutation of the machines")
    pos = {m: k for k, m in enumerate(order)}
    for job in ra.jobs:
        ps = [pos[m] for m in ra.eligible[job.id]]
        if max(ps) - min(ps) + 1 != len(ps):
            return False
    return True


def rai_from_ra(ra: RAInstance, order: Sequence[str] | None = None) -> RAIInstance:
    """View a restricted assignment instance as an interval instance.

    Uses the machine listing order unless an explicit order is given; raises
    ``ValueError`` if some eligible set is not contiguous.
    """
    order = tuple(order) if order is not None else ra.machines
    if not is_interval(ra, order):
        raise ValueError("eligible sets are not intervals under this order")
    pos = {m: k for k, m in enumerate(order)}
    interval = {}
    for job in ra.jobs:
        ps = [pos[m] for m in ra.eligible[job.id]]
        interval[job.id] = (min(ps) + 1, max(ps) + 1)
    return RAIInstance(base=ra, order=order, interval=interval)


def normalize(rar: RARInstance) -> RARInstance:
    """Round demands up to capacity values, then rank-compress into 1..m.

    Per resource, each demand is raised to the smallest capacity at least as
    large (a job whose demand exceeds every capacity of some resource is
    unschedulable and reported); afterwards the occurring values are replaced
    by their ranks, ties compressing to the same integer.  The eligibility
    relation is unchanged.
    """
    unschedulable: list[str] = []
    new_demands: dict[str, list[Fraction]] = {j.id: [] for j in rar.jobs}
    new_caps: dict[str, list[Fraction]] = {m: [] for m in rar.machines}
    for r in range(rar.resource_count):
        cap_values = sorted({rar.capacities[m][r] for m in rar.machines})
        rank = {v: Fraction(k + 1) for k, v in enumerate(cap_values)}
        for m in rar.machines:
            new_caps[m].append(rank[rar.capacities[m][r]])
        for job in rar.jobs:
            d = rar.demands[job.id][r]
            lifted = next((v for v in cap_values if v >= d), None)
            if lifted is None:
                unschedulable.append(job.id)
                new_demands[job.id].append(Fraction(len(cap_values) + 1))
            else:
                new_demands[job.id].append(rank[lifted])
    if unschedulable:
        raise UnschedulableJobError(sorted(set(unschedulable)))
    return RARInstance(
        resource_count=rar.resource_count,
        machines=rar.machines,
        capacities={m: tuple(v) for m, v in new_caps.items()},
        jobs=rar.jobs,
        demands={j: tuple(v) for j, v in new_demands.items()},
    )


def total_size_check(instance: Instance, target: Fraction | int) -> bool:
    """Whether the job sizes (private loads included) sum to |machines| * T."""
    if isinstance(instance, LRSInstance):
        raise TypeError("total size is machine dependent for low rank instances")
    return instance.total_size() == len(instance.machines) * as_rational(target)


def digits(value: int, width: int | None = None) -> tuple[int, ...]:
    """Base-10 digits of a nonnegative integer, most significant first.

    Used for the carry-free reasoning on instances whose sizes were built
    digit by digit; ``width`` left-pads with zeros.
    """
    if value < 0:
        raise ValueError("negative value")
    ds: list[int] = []
    v = value
    while v:
        ds.append(v % 10)
        v //= 10
    if not ds:
        ds.append(0)
    if width is not None:
        if len(ds) > width:
            raise ValueError(f"{value} does not fit in {width} digits")
        ds.extend([0] * (width - len(ds)))
    return tuple(reversed(ds))
