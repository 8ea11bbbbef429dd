"""The unsound rank-4 matching reduction and its refuting schedule.

The construction maps a matching instance to rank-4 unrelated scheduling
with element and dummy jobs whose fourth coordinates are 1 and 0.8/0.9/1.3.
It is not sound: a fixed five-triplet instance without a perfect cover still
admits a schedule with makespan 3 + 3*eps, below the claimed threshold of
3.09 + 3*eps.  Both the construction and the refuting schedule are built
here so the failure can be certified end to end.
"""

from __future__ import annotations

from fractions import Fraction

from ..core import LRSInstance, Schedule, as_rational
from ..matching import ThreeDM, element_token

ELEMENT_FOURTH = {
    "a": Fraction(1),
    "b": Fraction(1),
    "c": Fraction(1),
}
DUMMY_FOURTH = {
    "a": Fraction(4, 5),
    "b": Fraction(9, 10),
    "c": Fraction(13, 10),
}


def _machine_id(k: int) -> str:
    return f"e{k}"


def build_bhaskara(dm: ThreeDM, eps: Fraction | int) -> LRSInstance:
    """Rank-4 instance for a matching instance and a positive eps.

    With N = n/eps, the machine of triplet (i, j, k) has speed vector
    (N^i, N^j, N^k, 1); the jobs of an element with index i in set X carry
    eps * N^-i in X's coordinate and their role's constant in the fourth.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    n_base = Fraction(dm.n) / eps

    machines = tuple(_machine_id(k) for k in range(1, len(dm.triplets) + 1))
    speeds = {}
    for mid, (i, j, k) in zip(machines, dm.triplets):
        speeds[mid] = (n_base**i, n_base**j, n_base**k, Fraction(1))

    coord = {"a": 0, "b": 1, "c": 2}
    jobs: list[str] = []
    sizes: dict[str, tuple[Fraction, ...]] = {}

    def add(job_id: str, name: str, idx: int, fourth: Fraction) -> None:
        vec = [Fraction(0)] * 4
        vec[coord[name]] = eps * n_base**-idx
        vec[3] = fourth
        jobs.append(job_id)
        sizes[job_id] = tuple(vec)

    for name in ("a", "b", "c"):
        for i in range(1, dm.n + 1):
            x = (name, i)
            degree = sum(1 for t in dm.element_triplets() if x in t)
            add(f"EJob_{element_token(x)}", name, i, ELEMENT_FOURTH[name])
            for r in range(1, degree):
                add(f"DJob_{element_token(x)}_{r}", name, i, DUMMY_FOURTH[name])

    return LRSInstance(4, machines, speeds, tuple(jobs), sizes)


def counterexample_matching() -> ThreeDM:
    """The fixed five-triplet instance that admits no perfect cover."""
    return ThreeDM(
        3,
        (
            (1, 1, 2),
            (2, 2, 2),
            (3, 3, 3),
            (3, 2, 3),
            (3, 3, 1),
        ),
    )


def bhaskara_counterexample(eps: Fraction | int) -> tuple[ThreeDM, Schedule]:
    """The no-cover instance together with its cheap schedule.

    Evaluating the schedule on ``build_bhaskara`` of the instance yields
    machine loads 3 + 3*eps and 3 + (2 + 1/N)*eps only, so the makespan stays
    at 3 + 3*eps although no perfect cover exists.
    """
    dm = counterexample_matching()
    assignment = {
        "EJob_a1": "e1",
        "EJob_a2": "e1",
        "EJob_b1": "e1",
        "DJob_a3_1": "e2",
        "DJob_b2_1": "e2",
        "DJob_c2_1": "e2",
        "DJob_a3_2": "e3",
        "DJob_b3_1": "e3",
        "DJob_c3_1": "e3",
        "EJob_a3": "e4",
        "EJob_b2": "e4",
        "EJob_c3": "e4",
        "EJob_b3": "e5",
        "EJob_c1": "e5",
        "EJob_c2": "e5",
    }
    return dm, Schedule(assignment)
