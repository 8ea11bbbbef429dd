"""Matching-based reductions to restricted and resource-restricted instances."""

from __future__ import annotations

from ..core import Job, RAInstance, RARInstance
from ..matching import Element, ThreeDM, ThreeDMStar, element_token, zeta
from ..meta import GadgetMeta, tag
from .base import ALPHA_BETA, ReductionOutput

LST_TARGET = 2
RAR3_TARGET = ALPHA_BETA.target
RAR2_TARGET = ALPHA_BETA.target


def _machine_ids(count: int) -> list[str]:
    return [f"e{k}" for k in range(1, count + 1)]


def _ejob(x: Element) -> str:
    return f"EJob_{element_token(x)}"


def _djob(x: Element, r: int) -> str:
    return f"DJob_{element_token(x)}_{r}"


def _dm_machines(dm: ThreeDM) -> tuple[list[str], dict[str, GadgetMeta], dict[Element, list[str]]]:
    ids = _machine_ids(len(dm.triplets))
    meta: dict[str, GadgetMeta] = {}
    hosting: dict[Element, list[str]] = {x: [] for x in dm.elements()}
    for mid, triplet in zip(ids, dm.element_triplets()):
        meta[mid] = tag("Triplet", *(element_token(x) for x in triplet))
        for x in triplet:
            hosting[x].append(mid)
    return ids, meta, hosting


def reduce_lst(dm: ThreeDM) -> ReductionOutput:
    """Machines are the triplets; target 2.

    Each first-set element with degree d contributes d - 1 dummy jobs of size
    2; each second- and third-set element contributes one unit element job.
    A machine either holds one dummy or two element jobs.
    """
    ids, meta, hosting = _dm_machines(dm)
    jobs: list[Job] = []
    eligible: dict[str, frozenset[str]] = {}

    def add(job_id: str, size: int, machines: list[str], m: GadgetMeta) -> None:
        jobs.append(Job(job_id, size, m))
        eligible[job_id] = frozenset(machines)
        meta[job_id] = m

    for i in range(1, dm.n + 1):
        x = ("a", i)
        for r in range(1, len(hosting[x])):
            add(_djob(x, r), 2, hosting[x], tag("DummyJob", "a", i, r))
    for name in ("b", "c"):
        for i in range(1, dm.n + 1):
            x = (name, i)
            add(_ejob(x), 1, hosting[x], tag("ElementJob", name, i))

    instance = RAInstance(tuple(ids), tuple(jobs), eligible)
    return ReductionOutput("lst", instance, LST_TARGET, meta, source=dm)


def model_rar6(dm: ThreeDM) -> RARInstance:
    """Six-resource encoding of the eligibility relation of :func:`reduce_lst`.

    Per element set there are two resources pinning the index from below and
    above, so a job is eligible exactly on the triplets containing its
    element.
    """
    out = reduce_lst(dm)
    ra = out.instance
    assert isinstance(ra, RAInstance)
    n = dm.n
    ids = list(ra.machines)
    caps: dict[str, tuple[int, ...]] = {}
    for mid, (i, j, k) in zip(ids, dm.triplets):
        caps[mid] = (i, n + 1 - i, j, n + 1 - j, k, n + 1 - k)

    offset = {"a": 0, "b": 2, "c": 4}
    demands: dict[str, tuple[int, ...]] = {}
    for job in ra.jobs:
        assert job.tag is not None
        name, idx = str(job.tag.indices[0]), int(job.tag.indices[1])
        vec = [0] * 6
        vec[offset[name]] = idx
        vec[offset[name] + 1] = n + 1 - idx
        demands[job.id] = tuple(vec)

    return RARInstance(6, tuple(ids), caps, ra.jobs, demands)


def reduce_rar3(dm: ThreeDM) -> ReductionOutput:
    """Three-resource instance with target 47.

    Capacities are the element indices of each triplet; every element gets
    one element job (sizes 12/13/22 by set) and degree-minus-one dummies
    (14/15/18), demanding its own index in its set's resource.
    """
    ids, meta, hosting = _dm_machines(dm)
    caps = {
        mid: tuple(int(x) for x in triplet_indices)
        for mid, triplet_indices in zip(ids, dm.triplets)
    }
    jobs: list[Job] = []
    demands: dict[str, tuple[int, ...]] = {}

    def demand(name: str, idx: int) -> tuple[int, int, int]:
        vec = [0, 0, 0]
        vec[("a", "b", "c").index(name)] = idx
        return tuple(vec)

    for name in ("a", "b", "c"):
        for i in range(1, dm.n + 1):
            x = (name, i)
            m = tag("ElementJob", name, i)
            job = Job(_ejob(x), ALPHA_BETA.alpha(name), m)
            jobs.append(job)
            demands[job.id] = demand(name, i)
            meta[job.id] = m
            for r in range(1, len(hosting[x])):
                dm_meta = tag("DummyJob", name, i, r)
                dummy = Job(_djob(x, r), ALPHA_BETA.beta(name), dm_meta)
                jobs.append(dummy)
                demands[dummy.id] = demand(name, i)
                meta[dummy.id] = dm_meta

    instance = RARInstance(3, tuple(ids), caps, tuple(jobs), demands)
    return ReductionOutput("rar3", instance, RAR3_TARGET, meta, source=dm)


def _star_capacity(triplet, n: int) -> tuple[int, int]:
    (an, ai), (bn, bi), (cn, ci) = triplet
    if bn == "b":
        first = 2 * ai if an == "a" else 2 * ai - 1
        return (first, 3 * n + bi)
    if an == "a":
        return (2 * ai, ai)
    return (2 * ai - 1, zeta(ai))


def _star_demand(x: Element, n: int) -> tuple[int, int]:
    name, i = x
    return {
        "a": (2 * i, 0),
        "a'": (2 * i - 1, 0),
        "b": (0, 3 * n + i),
        "c": (0, 3 * n + i),
        "b'": (2 * i - 1, 0),
        "c'": (0, i),
    }[name]


def reduce_rar2(star: ThreeDMStar) -> ReductionOutput:
    """Two-resource instance with target 47 from a star matching instance.

    Capacity and demand vectors interleave the primed and unprimed indices so
    that two resources suffice; element membership still implies eligibility,
    while the counting argument over the 47-sum triples carries correctness.
    """
    triplets = star.all_triplets()
    ids = _machine_ids(len(triplets))
    meta: dict[str, GadgetMeta] = {}
    hosting: dict[Element, list[str]] = {x: [] for x in star.elements()}
    caps: dict[str, tuple[int, ...]] = {}
    for mid, triplet in zip(ids, triplets):
        meta[mid] = tag("Triplet", *(element_token(x) for x in triplet))
        caps[mid] = _star_capacity(triplet, star.n)
        for x in triplet:
            hosting[x].append(mid)

    jobs: list[Job] = []
    demands: dict[str, tuple[int, ...]] = {}
    for x in star.elements():
        name, i = x
        m = tag("ElementJob", name, i)
        job = Job(_ejob(x), ALPHA_BETA.alpha(name), m)
        jobs.append(job)
        demands[job.id] = _star_demand(x, star.n)
        meta[job.id] = m
        for r in range(1, len(hosting[x])):
            dmeta = tag("DummyJob", name, i, r)
            dummy = Job(_djob(x, r), ALPHA_BETA.beta(name), dmeta)
            jobs.append(dummy)
            demands[dummy.id] = _star_demand(x, star.n)
            meta[dummy.id] = dmeta

    instance = RARInstance(2, tuple(ids), caps, tuple(jobs), demands)
    return ReductionOutput("rar2", instance, RAR2_TARGET, meta, source=star)
