"""Graph balancing reduction from modified 3-SAT and its four-resource model."""

from __future__ import annotations

from ..core import Job, RAInstance, RARInstance
from ..meta import GadgetMeta, tag
from ..sat import CNFFormula, FormulaError
from .base import ReductionOutput

GB_TARGET = 2


def reduce_graph_balancing(formula: CNFFormula) -> ReductionOutput:
    """Restricted assignment with at most two eligible machines per job.

    Requires the modified form (every variable three occurrences, every
    literal at most two).  Clause machines hold at most one clause job next
    to their dummy, forcing at least one clause job per clause onto its
    literal machine, which in turn pushes the size-2 truth job to the
    complementary literal machine.
    """
    if not formula.is_modified():
        raise FormulaError("formula is not in modified form")

    machines: list[str] = []
    meta: dict[str, GadgetMeta] = {}
    for i in range(1, len(formula.clauses) + 1):
        mid = f"v{i}"
        machines.append(mid)
        meta[mid] = tag("CMach", i)
    for j in range(1, formula.num_vars + 1):
        for alpha in (1, 0):
            mid = f"u{j}_{alpha}"
            machines.append(mid)
            meta[mid] = tag("TMach", j, alpha)

    jobs: list[Job] = []
    eligible: dict[str, frozenset[str]] = {}

    def add(job_id: str, size: int, elig: frozenset[str], m: GadgetMeta) -> None:
        jobs.append(Job(job_id, size, m))
        eligible[job_id] = elig
        meta[job_id] = m

    for j in range(1, formula.num_vars + 1):
        add(
            f"e{j}",
            2,
            frozenset([f"u{j}_1", f"u{j}_0"]),
            tag("TruthJob", j),
        )
    for i, clause in enumerate(formula.clauses, start=1):
        for l in clause:
            alpha = 1 if l.positive else 0
            add(
                f"f_{i}_{l.var}_{alpha}",
                1,
                frozenset([f"v{i}", f"u{l.var}_{alpha}"]),
                tag("ClauseJob", i, l.var, alpha),
            )
        if len(clause) < 3:
            add(
                f"d{i}",
                3 - len(clause),
                frozenset([f"v{i}"]),
                tag("DummyClause", i),
            )

    instance = RAInstance(tuple(machines), tuple(jobs), eligible)
    return ReductionOutput("gb", instance, GB_TARGET, meta, source=formula)


def model_rar4(formula: CNFFormula) -> RARInstance:
    """Four-resource encoding of the graph balancing eligibility relation.

    The first two resources pin a literal index from both sides, the last two
    pin a clause index; truth jobs block the clause coordinates entirely.
    """
    out = reduce_graph_balancing(formula)
    ra = out.instance
    assert isinstance(ra, RAInstance)
    n = formula.num_vars
    m = len(formula.clauses)

    caps: dict[str, tuple[int, ...]] = {}
    demands: dict[str, tuple[int, ...]] = {}
    for mid in ra.machines:
        info = out.meta[mid]
        if info.kind == "CMach":
            (i,) = (int(v) for v in info.indices)
            caps[mid] = (2 * n + 1, 2 * n + 1, i, (m + 1) - i)
        else:
            j, alpha = (int(v) for v in info.indices)
            lit_index = 2 * j - alpha
            caps[mid] = (lit_index, (2 * n + 1) - lit_index, m + 1, m + 1)
    for job in ra.jobs:
        info = job.tag
        assert info is not None
        if info.kind == "TruthJob":
            (j,) = (int(v) for v in info.indices)
            demands[job.id] = (2 * j - 1, (2 * n + 1) - 2 * j, m + 1, m + 1)
        elif info.kind == "ClauseJob":
            i, j, alpha = (int(v) for v in info.indices)
            lit_index = 2 * j - alpha
            demands[job.id] = (lit_index, (2 * n + 1) - lit_index, i, (m + 1) - i)
        else:
            (i,) = (int(v) for v in info.indices)
            demands[job.id] = (2 * n + 1, 2 * n + 1, i, (m + 1) - i)

    return RARInstance(4, ra.machines, caps, ra.jobs, demands)
