"""Formula types, a brute-force satisfiability oracle, and transformations.

Three formula flavours appear here: plain CNF with clauses of up to three
disjunctive literals, pure exactly-one formulas, and star formulas mixing
equally many exactly-one and exactly-two clauses in which every literal
occurs exactly twice.  The oracle is exhaustive by design; it is the trusted
side of every equivalence check in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .core import SchedError


class FormulaError(SchedError):
    """A formula violating its structural invariants."""


@dataclass(frozen=True)
class Literal:
    """A variable index (1-based) with a polarity."""

    var: int
    positive: bool = True

    def __post_init__(self) -> None:
        if self.var < 1:
            raise FormulaError(f"variable index must be >= 1, got {self.var}")

    def negate(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def value(self, assignment: Mapping[int, bool]) -> bool:
        v = assignment[self.var]
        return v if self.positive else not v

    def __int__(self) -> int:
        return self.var if self.positive else -self.var


def lit(signed: int) -> Literal:
    """Literal from a signed integer, e.g. -3 for the negation of x3."""
    if signed == 0:
        raise FormulaError("literal 0 is not allowed")
    return Literal(abs(signed), signed > 0)


class ClauseKind(Enum):
    ONE_IN_THREE = 1
    TWO_IN_THREE = 2


@dataclass(frozen=True)
class StarClause:
    """Three positioned literals satisfied by exactly one or exactly two."""

    literals: tuple[Literal, Literal, Literal]
    kind: ClauseKind

    def __post_init__(self) -> None:
        if len(self.literals) != 3:
            raise FormulaError("star clauses have exactly 3 literals")
        object.__setattr__(self, "literals", tuple(self.literals))

    def satisfied(self, assignment: Mapping[int, bool]) -> bool:
        true_count = sum(1 for l in self.literals if l.value(assignment))
        return true_count == self.kind.value


def _occurrence_counts(clauses: Iterable) -> dict[tuple[int, bool], int]:
    counts: dict[tuple[int, bool], int] = {}
    for clause in clauses:
        for l in clause:
            key = (l.var, l.positive)
            counts[key] = counts.get(key, 0) + 1
    return counts


@dataclass(frozen=True)
class StarFormula:
    """Equally many exactly-one and exactly-two clauses, each literal twice.

    The exactly-one clauses come first.  With m clauses of each kind and n
    variables the occurrence count forces 3m = 2n.
    """

    num_vars: int
    clauses: tuple[StarClause, ...]

    def __post_init__(self) -> None:
        clauses = tuple(self.clauses)
        object.__setattr__(self, "clauses", clauses)
        one = [c for c in clauses if c.kind is ClauseKind.ONE_IN_THREE]
        two = [c for c in clauses if c.kind is ClauseKind.TWO_IN_THREE]
        if len(one) != len(two):
            raise FormulaError(
                f"clause kinds unbalanced: {len(one)} exactly-one vs {len(two)} exactly-two"
            )
        if clauses[: len(one)] != tuple(one):
            raise FormulaError("exactly-one clauses must precede exactly-two clauses")
        m = len(one)
        if 3 * m != 2 * self.num_vars:
            raise FormulaError(f"3m = 2n violated: m={m}, n={self.num_vars}")
        counts = _occurrence_counts(c.literals for c in clauses)
        for v in range(1, self.num_vars + 1):
            for polarity in (True, False):
                c = counts.pop((v, polarity), 0)
                if c != 2:
                    side = "positive" if polarity else "negative"
                    raise FormulaError(f"x{v} occurs {c} times {side}, expected 2")
        if counts:
            raise FormulaError("literals of variables beyond num_vars present")

    @property
    def num_one_clauses(self) -> int:
        return len(self.clauses) // 2

    def satisfied(self, assignment: Mapping[int, bool]) -> bool:
        return all(c.satisfied(assignment) for c in self.clauses)


@dataclass(frozen=True)
class OneInThreeFormula:
    """Conjunction of three-literal clauses, each satisfied by exactly one."""

    num_vars: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self) -> None:
        clauses = tuple(tuple(c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise FormulaError("clauses have exactly 3 literals")
            for l in c:
                if l.var > self.num_vars:
                    raise FormulaError(f"variable x{l.var} beyond num_vars")
        object.__setattr__(self, "clauses", clauses)

    def satisfied(self, assignment: Mapping[int, bool]) -> bool:
        return all(
            sum(1 for l in c if l.value(assignment)) == 1 for c in self.clauses
        )


@dataclass(frozen=True)
class CNFFormula:
    """Conjunction of disjunctive clauses with at most three literals each."""

    num_vars: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __post_init__(self) -> None:
        clauses = tuple(tuple(c) for c in self.clauses)
        for c in clauses:
            if not 1 <= len(c) <= 3:
                raise FormulaError("clauses have between 1 and 3 literals")
            if len({(l.var, l.positive) for l in c}) != len(c):
                raise FormulaError("repeated literal within a clause")
            for l in c:
                if l.var > self.num_vars:
                    raise FormulaError(f"variable x{l.var} beyond num_vars")
        object.__setattr__(self, "clauses", clauses)

    def satisfied(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(l.value(assignment) for l in c) for c in self.clauses)

    def is_modified(self) -> bool:
        """Every variable occurs exactly three times, every literal at most twice."""
        counts = _occurrence_counts(self.clauses)
        for v in range(1, self.num_vars + 1):
            pos = counts.get((v, True), 0)
            neg = counts.get((v, False), 0)
            if pos + neg != 3 or pos > 2 or neg > 2:
                return False
        return True


Formula = StarFormula | OneInThreeFormula | CNFFormula

DEFAULT_VAR_CAP = 24


def brute_force_sat(
    formula: Formula, var_cap: int = DEFAULT_VAR_CAP
) -> dict[int, bool] | None:
    """First fulfilling assignment in lexicographic order, or None.

    Enumeration order is fixed (false before true, x1 outermost) so results
    are deterministic.  Raises on formulas with more than ``var_cap``
    variables; exhaustiveness is the point of this oracle.
    """
    n = formula.num_vars
    if n > var_cap:
        raise SchedError(f"variable cap exceeded: {n} > {var_cap}")
    for bits in itertools.product((False, True), repeat=n):
        assignment = dict(zip(range(1, n + 1), bits))
        if formula.satisfied(assignment):
            return assignment
    return None


def one_in_three_to_star(formula: OneInThreeFormula) -> StarFormula:
    """Equisatisfiable star formula from a pure exactly-one formula.

    Each variable x with d occurrences becomes copies x_1..x_d chained by
    exactly-two clauses (x_k, !x_{k+1}, y_k) over always-true helper
    variables y_k, the original clauses are rewritten onto the copies, and
    each rewritten clause gets a fully negated exactly-two companion.
    """
    occurrences: dict[int, int] = {}
    for c in formula.clauses:
        for l in c:
            occurrences[l.var] = occurrences.get(l.var, 0) + 1
    for v in range(1, formula.num_vars + 1):
        if occurrences.get(v, 0) < 1:
            raise FormulaError(f"x{v} never occurs; every variable must occur")

    # Variable layout: for source variable v with d occurrences, copies take
    # indices base+1..base+d and helpers base+d+1..base+2d.
    base: dict[int, int] = {}
    next_free = 0
    for v in range(1, formula.num_vars + 1):
        base[v] = next_free
        next_free += 2 * occurrences[v]
    total_vars = next_free

    def copy_var(v: int, k: int) -> int:
        return base[v] + k

    def helper_var(v: int, k: int) -> int:
        return base[v] + occurrences[v] + k

    one_clauses: list[StarClause] = []
    two_clauses: list[StarClause] = []

    seen: dict[int, int] = {v: 0 for v in occurrences}
    rewritten: list[tuple[Literal, Literal, Literal]] = []
    for c in formula.clauses:
        new_lits = []
        for l in c:
            seen[l.var] += 1
            new_lits.append(Literal(copy_var(l.var, seen[l.var]), l.positive))
        rewritten.append(tuple(new_lits))

    for lits in rewritten:
        one_clauses.append(StarClause(lits, ClauseKind.ONE_IN_THREE))
        two_clauses.append(
            StarClause(tuple(l.negate() for l in lits), ClauseKind.TWO_IN_THREE)
        )

    for v in range(1, formula.num_vars + 1):
        d = occurrences[v]
        for k in range(1, d + 1):
            succ = k + 1 if k < d else 1
            two_clauses.append(
                StarClause(
                    (
                        Literal(copy_var(v, k), True),
                        Literal(copy_var(v, succ), False),
                        Literal(helper_var(v, k), True),
                    ),
                    ClauseKind.TWO_IN_THREE,
                )
            )
            y = Literal(helper_var(v, k), True)
            one_clauses.append(
                StarClause((y, y.negate(), y.negate()), ClauseKind.ONE_IN_THREE)
            )

    return StarFormula(total_vars, tuple(one_clauses) + tuple(two_clauses))


@dataclass(frozen=True)
class Kappa:
    """Bijection between variable occurrences (j, t) and clause slots (i, s).

    t = 1, 2 are the first and second positive occurrence of x_j, t = 3, 4
    the negative ones; (i, s) is the clause index and the position within it.
    """

    num_vars: int
    forward: Mapping[tuple[int, int], tuple[int, int]]

    def __post_init__(self) -> None:
        fwd = dict(self.forward)
        domain = {(j, t) for j in range(1, self.num_vars + 1) for t in range(1, 5)}
        if set(fwd) != domain:
            raise FormulaError("occurrence map domain is not [n] x [4]")
        if len(set(fwd.values())) != len(fwd):
            raise FormulaError("occurrence map is not injective")
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(
            self, "_inverse", {v: k for k, v in fwd.items()}
        )

    def __call__(self, j: int, t: int) -> tuple[int, int]:
        return self.forward[(j, t)]

    def inverse(self, i: int, s: int) -> tuple[int, int]:
        return self._inverse[(i, s)]  # type: ignore[attr-defined]


def kappa_of(formula: StarFormula) -> Kappa:
    """Occurrence bijection of a star formula.

    Occurrence order follows textual clause order; positions are distinct so
    no ties can occur.
    """
    slots: dict[tuple[int, int], tuple[int, int]] = {}
    counters: dict[tuple[int, bool], int] = {}
    for i, clause in enumerate(formula.clauses, start=1):
        for s, l in enumerate(clause.literals, start=1):
            seen = counters.get((l.var, l.positive), 0) + 1
            counters[(l.var, l.positive)] = seen
            t = seen if l.positive else 2 + seen
            slots[(l.var, t)] = (i, s)
    return Kappa(formula.num_vars, slots)


def to_modified_3sat(formula: CNFFormula) -> CNFFormula:
    """Rewrite so every variable occurs exactly three times, literals at most twice.

    The d occurrences of a variable are replaced by fresh copies that a cycle
    of two-literal implication clauses (z_k or !z_{k+1}) forces to agree.
    """
    occurrences: dict[int, int] = {}
    for c in formula.clauses:
        for l in c:
            occurrences[l.var] = occurrences.get(l.var, 0) + 1

    used = [v for v in range(1, formula.num_vars + 1) if occurrences.get(v, 0)]
    base = {}
    next_free = 0
    for v in used:
        base[v] = next_free
        next_free += occurrences[v]

    seen = {v: 0 for v in used}
    new_clauses: list[tuple[Literal, ...]] = []
    for c in formula.clauses:
        new_lits = []
        for l in c:
            seen[l.var] += 1
            new_lits.append(Literal(base[l.var] + seen[l.var], l.positive))
        new_clauses.append(tuple(new_lits))
    for v in used:
        d = occurrences[v]
        for k in range(1, d + 1):
            succ = k + 1 if k < d else 1
            new_clauses.append(
                (Literal(base[v] + k, True), Literal(base[v] + succ, False))
            )
    return CNFFormula(next_free, tuple(new_clauses))
