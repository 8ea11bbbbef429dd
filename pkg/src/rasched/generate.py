"""Seeded random generators and the fixed example inputs.

Everything takes an explicit :class:`random.Random` so identical seeds give
identical objects, byte for byte after serialization.
"""

from __future__ import annotations

import random

from .core import Job, RAIInstance, RAInstance, RARInstance, rai_from_ra
from .matching import ThreeDM, ThreeDMStar
from .sat import (
    ClauseKind,
    CNFFormula,
    Literal,
    OneInThreeFormula,
    StarClause,
    StarFormula,
    lit,
    to_modified_3sat,
)


def minimal_star_formula() -> StarFormula:
    """The smallest star formula: three variables, four clauses.

    Satisfied by the all-true assignment (among others).
    """
    return StarFormula(
        3,
        (
            StarClause((lit(-2), lit(-3), lit(1)), ClauseKind.ONE_IN_THREE),
            StarClause((lit(-1), lit(2), lit(-3)), ClauseKind.ONE_IN_THREE),
            StarClause((lit(3), lit(-2), lit(1)), ClauseKind.TWO_IN_THREE),
            StarClause((lit(-1), lit(3), lit(2)), ClauseKind.TWO_IN_THREE),
        ),
    )


def random_star_formula(rng: random.Random, num_vars: int) -> StarFormula:
    """Uniform random star formula over ``num_vars`` variables.

    The 4n occurrence tokens (two positive, two negative per variable) are
    shuffled into the 2m * 3 clause slots; num_vars must be a multiple of 3
    so that 3m = 2n has a solution.
    """
    if num_vars % 3 != 0 or num_vars <= 0:
        raise ValueError("the variable count must be a positive multiple of 3")
    m = 2 * num_vars // 3
    tokens = [
        Literal(j, t <= 2) for j in range(1, num_vars + 1) for t in range(1, 5)
    ]
    rng.shuffle(tokens)
    clauses = []
    for i in range(2 * m):
        kind = ClauseKind.ONE_IN_THREE if i < m else ClauseKind.TWO_IN_THREE
        clauses.append(StarClause(tuple(tokens[3 * i : 3 * i + 3]), kind))
    return StarFormula(num_vars, tuple(clauses))


def random_one_in_three(
    rng: random.Random, num_vars: int, num_clauses: int, tries: int = 1000
) -> OneInThreeFormula:
    """Random exactly-one formula in which every variable occurs."""
    if 3 * num_clauses < num_vars:
        raise ValueError("too few clauses to mention every variable")
    for _ in range(tries):
        clauses = []
        for _ in range(num_clauses):
            variables = rng.sample(range(1, num_vars + 1), 3)
            clauses.append(
                tuple(Literal(v, rng.random() < 0.5) for v in variables)
            )
        used = {l.var for c in clauses for l in c}
        if len(used) == num_vars:
            return OneInThreeFormula(num_vars, tuple(clauses))
    raise ValueError("could not cover every variable; raise the clause count")


def random_3sat(rng: random.Random, num_vars: int, num_clauses: int) -> CNFFormula:
    if num_vars < 3:
        raise ValueError("need at least three variables")
    clauses = []
    for _ in range(num_clauses):
        variables = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(tuple(Literal(v, rng.random() < 0.5) for v in variables))
    return CNFFormula(num_vars, tuple(clauses))


def random_modified_3sat(
    rng: random.Random, num_vars: int, num_clauses: int
) -> CNFFormula:
    return to_modified_3sat(random_3sat(rng, num_vars, num_clauses))


def random_3dm(
    rng: random.Random, n: int, num_triplets: int, tries: int = 1000
) -> ThreeDM:
    """Random matching instance with every element covered."""
    if num_triplets < n:
        raise ValueError("need at least n triplets to cover every element")
    if num_triplets > n**3:
        raise ValueError("more triplets than exist")
    universe = [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        for k in range(1, n + 1)
    ]
    for _ in range(tries):
        chosen = rng.sample(universe, num_triplets)
        covered = {("a", t[0]) for t in chosen}
        covered |= {("b", t[1]) for t in chosen}
        covered |= {("c", t[2]) for t in chosen}
        if len(covered) == 3 * n:
            return ThreeDM(n, tuple(sorted(chosen)))
    raise ValueError("could not cover every element; raise the triplet count")


def random_3dm_star(
    rng: random.Random, n: int, extra: int = 0, solvable: bool | None = None
) -> ThreeDMStar:
    """Random star matching instance; the first family covers every b and c.

    A perfect cover forces the derived family to be used block-uniformly, so
    purely random first families are almost always no-instances; with
    ``solvable=True`` the first family is seeded with a fitting system of
    representatives instead.
    """
    size = 3 * n
    e1 = set()
    if solvable:
        perm = list(range(1, size + 1))
        rng.shuffle(perm)
        for block in range(n):
            primed = rng.random() < 0.5
            # The derived family covers one side of each block; the first
            # family must supply the other side on distinct b/c pairs.
            name = "a'" if not primed else "a"
            for pos in range(3):
                i = 3 * block + pos + 1
                e1.add(((name, i), ("b", perm[i - 1]), ("c", perm[i - 1])))
    for j in range(1, size + 1):
        if not any(t[1] == ("b", j) for t in e1):
            name = "a" if rng.random() < 0.5 else "a'"
            e1.add(((name, rng.randint(1, size)), ("b", j), ("c", j)))
    while len(e1) < size + extra:
        name = "a" if rng.random() < 0.5 else "a'"
        j = rng.randint(1, size)
        e1.add(((name, rng.randint(1, size)), ("b", j), ("c", j)))
    return ThreeDMStar(n, tuple(sorted(e1)))


def random_ra_instance(
    rng: random.Random,
    num_machines: int,
    num_jobs: int,
    size_pool: tuple[int, ...] = (1, 2, 3, 4, 5, 6),
    density: float = 0.5,
) -> RAInstance:
    machines = tuple(f"m{i}" for i in range(1, num_machines + 1))
    jobs = []
    eligible = {}
    for j in range(1, num_jobs + 1):
        job_id = f"j{j}"
        jobs.append(Job(job_id, rng.choice(size_pool)))
        chosen = [m for m in machines if rng.random() < density]
        if not chosen:
            chosen = [rng.choice(machines)]
        eligible[job_id] = frozenset(chosen)
    return RAInstance(machines, tuple(jobs), eligible)


def random_rai_instance(
    rng: random.Random,
    num_machines: int,
    num_jobs: int,
    size_pool: tuple[int, ...] = (1, 2, 3, 4, 5, 6),
) -> RAIInstance:
    machines = tuple(f"m{i}" for i in range(1, num_machines + 1))
    jobs = []
    eligible = {}
    for j in range(1, num_jobs + 1):
        job_id = f"j{j}"
        jobs.append(Job(job_id, rng.choice(size_pool)))
        lo = rng.randint(1, num_machines)
        hi = rng.randint(lo, num_machines)
        eligible[job_id] = frozenset(machines[lo - 1 : hi])
    return rai_from_ra(RAInstance(machines, tuple(jobs), eligible))


def random_rar_instance(
    rng: random.Random,
    resources: int,
    num_machines: int,
    num_jobs: int,
    max_value: int = 8,
    fractional: bool = False,
    tries: int = 100,
) -> RARInstance:
    """Random resource-restricted instance with no unschedulable job."""

    def value() -> object:
        from fractions import Fraction

        v = rng.randint(0, max_value)
        if fractional and rng.random() < 0.5:
            return Fraction(2 * v + 1, 2)
        return Fraction(v)

    machines = tuple(f"m{i}" for i in range(1, num_machines + 1))
    caps = {m: tuple(value() for _ in range(resources)) for m in machines}
    jobs = []
    demands = {}
    for j in range(1, num_jobs + 1):
        job_id = f"j{j}"
        jobs.append(Job(job_id, rng.randint(1, 6)))
        for _ in range(tries):
            demand = tuple(value() for _ in range(resources))
            if any(
                all(d <= c for d, c in zip(demand, caps[m])) for m in machines
            ):
                break
        else:
            raise ValueError("could not draw a schedulable demand vector")
        demands[job_id] = demand
    return RARInstance(resources, machines, caps, tuple(jobs), demands)
