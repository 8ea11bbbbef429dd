"""Independent brute-force deciders used as trusted references in tests.

These recurse over every assignment in fixed job order with no heuristics,
orderings or propagation; repeated residual profiles at the same depth are
merged, which does not change the decided language, only the running time.
They share nothing with the package's search engine.
"""

from __future__ import annotations

from fractions import Fraction

from rasched.core import RAInstance


def _prepared(ra: RAInstance):
    index = {m: k for k, m in enumerate(ra.machines)}
    sizes = [j.size for j in ra.jobs]
    elig = [sorted(index[m] for m in ra.eligible[j.id]) for j in ra.jobs]
    return sizes, elig, len(ra.machines)


def exhaustive_makespan(ra: RAInstance, target: Fraction | int) -> bool:
    """True iff some eligible assignment keeps every load at most target."""
    target = Fraction(target)
    sizes, elig, m = _prepared(ra)
    seen: set[tuple] = set()

    def walk(depth: int, loads: tuple) -> bool:
        if depth == len(sizes):
            return True
        key = (depth, loads)
        if key in seen:
            return False
        seen.add(key)
        for i in elig[depth]:
            new = loads[i] + sizes[depth]
            if new <= target:
                if walk(depth + 1, loads[:i] + (new,) + loads[i + 1 :]):
                    return True
        return False

    return walk(0, (Fraction(0),) * m)


def exhaustive_exact(ra: RAInstance, target: Fraction | int) -> bool:
    """True iff some eligible assignment loads every machine to exactly target."""
    target = Fraction(target)
    sizes, elig, m = _prepared(ra)
    seen: set[tuple] = set()

    def walk(depth: int, loads: tuple) -> bool:
        if depth == len(sizes):
            return all(v == target for v in loads)
        key = (depth, loads)
        if key in seen:
            return False
        seen.add(key)
        for i in elig[depth]:
            new = loads[i] + sizes[depth]
            if new <= target:
                if walk(depth + 1, loads[:i] + (new,) + loads[i + 1 :]):
                    return True
        return False

    return walk(0, (Fraction(0),) * m)


def exhaustive_min_load(ra: RAInstance, target: Fraction | int) -> bool:
    """True iff some eligible assignment gives every machine at least target."""
    target = Fraction(target)
    sizes, elig, m = _prepared(ra)
    seen: set[tuple] = set()
    # Loads above the target are equivalent for the question; clamping keeps
    # the memo small without changing the answer.

    def walk(depth: int, loads: tuple) -> bool:
        if depth == len(sizes):
            return all(v >= target for v in loads)
        key = (depth, loads)
        if key in seen:
            return False
        seen.add(key)
        for i in elig[depth]:
            new = min(loads[i] + sizes[depth], target)
            if walk(depth + 1, loads[:i] + (new,) + loads[i + 1 :]):
                return True
        return False

    return walk(0, (Fraction(0),) * m)
