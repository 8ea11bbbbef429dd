"""Structural embeddings between restriction classes.

These are the constructive halves of the containment results: interval
instances into two resources, arbitrary restrictions into one resource per
machine, and resource restrictions into low rank unrelated scheduling with
controlled error.  Each embedding preserves the eligibility relation
exactly; the witness constructors build the fixed instances separating the
classes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..core import (
    Job,
    LRSInstance,
    RAIInstance,
    RAInstance,
    RARInstance,
    as_rational,
    normalize,
)
from ..meta import tag


def rai_to_rar2(inst: RAIInstance) -> RARInstance:
    """Two-resource encoding of an interval instance.

    Machine k gets capacities (k, m+1-k); a job eligible on positions l..r
    demands (l, m+1-r).  Machines left of l fail the first resource, machines
    right of r the second.
    """
    m = len(inst.order)
    caps = {
        mid: (Fraction(k), Fraction(m + 1 - k))
        for k, mid in enumerate(inst.order, start=1)
    }
    demands = {}
    for job in inst.jobs:
        lo, hi = inst.interval[job.id]
        demands[job.id] = (Fraction(lo), Fraction(m + 1 - hi))
    return RARInstance(2, inst.order, caps, inst.jobs, demands)


def ra_to_rar_m(inst: RAInstance) -> RARInstance:
    """One resource per machine: capacity 0 on your own resource, 1 elsewhere.

    A job demands 0 on the resources of its eligible machines and 1 on the
    rest, reproducing the eligibility relation exactly.
    """
    resources = inst.machines
    caps = {
        mid: tuple(Fraction(0) if r == mid else Fraction(1) for r in resources)
        for mid in inst.machines
    }
    demands = {}
    for job in inst.jobs:
        elig = inst.eligible[job.id]
        demands[job.id] = tuple(
            Fraction(0) if r in elig else Fraction(1) for r in resources
        )
    return RARInstance(len(resources), inst.machines, caps, inst.jobs, demands)


def witness_rar_m(m: int) -> RAInstance:
    """m unit jobs, each eligible everywhere except one private machine.

    The eligible sets are all (m-1)-subsets; fewer than m resources cannot
    express them.
    """
    if m < 2:
        raise ValueError("m must be at least 2, eligible sets may not be empty")
    machines = tuple(f"m{k}" for k in range(1, m + 1))
    jobs = []
    eligible = {}
    for subset in itertools.combinations(machines, m - 1):
        excluded = next(mm for mm in machines if mm not in subset)
        job_id = f"not_{excluded}"
        jobs.append(Job(job_id, 1))
        eligible[job_id] = frozenset(subset)
    return RAInstance(machines, tuple(jobs), eligible)


def witness_rar2_not_rai() -> RARInstance:
    """The fixed four-machine two-resource instance with no interval order.

    Its eligible sets make machine 1 a required neighbour of each of the
    other three machines, which no total order provides.
    """
    machines = ("m1", "m2", "m3", "m4")
    caps = {
        "m1": (Fraction(3), Fraction(3)),
        "m2": (Fraction(4), Fraction(1)),
        "m3": (Fraction(2), Fraction(2)),
        "m4": (Fraction(1), Fraction(4)),
    }
    jobs = (
        Job("j_all", 1),
        Job("j_12", 1),
        Job("j_13", 1),
        Job("j_14", 1),
    )
    demands = {
        "j_all": (Fraction(1, 2), Fraction(1, 2)),
        "j_12": (Fraction(5, 2), Fraction(3, 4)),
        "j_13": (Fraction(3, 2), Fraction(3, 2)),
        "j_14": (Fraction(3, 4), Fraction(5, 2)),
    }
    return RARInstance(2, machines, caps, jobs, demands)


def rar_to_lrs(
    inst: RARInstance, eps: Fraction | int, big: Fraction | int
) -> LRSInstance:
    """Rank R+1 approximation of a resource-restricted instance.

    With delta = eps/R and N = max(big/delta, 1), job vectors carry
    delta * N^demand per resource plus the plain size, machine vectors
    N^-capacity plus one.  Eligible pairs land within eps above the size;
    ineligible pairs overshoot by at least ``big``.  The instance is
    normalized first so all exponents are small integers.
    """
    eps = as_rational(eps)
    big = as_rational(big)
    if eps <= 0 or big <= 0:
        raise ValueError("eps and the separation constant must be positive")
    if inst.resource_count == 0:
        raise ValueError("at least one resource required")

    norm = normalize(inst)
    r_count = norm.resource_count
    delta = eps / r_count
    n_base = max(big / delta, Fraction(1))

    sizes = {}
    for job in norm.jobs:
        demand = norm.demands[job.id]
        vec = [delta * n_base ** int(d) for d in demand]
        vec.append(job.size)
        sizes[job.id] = tuple(vec)
    speeds = {}
    for mid in norm.machines:
        cap = norm.capacities[mid]
        vec = [n_base ** -int(c) for c in cap]
        vec.append(Fraction(1))
        speeds[mid] = tuple(vec)

    return LRSInstance(
        dimension=r_count + 1,
        machines=norm.machines,
        speeds=speeds,
        jobs=tuple(j.id for j in norm.jobs),
        sizes=sizes,
    )
