import random

import pytest

from rasched.core import eligible_set, to_restricted_assignment
from rasched.generate import random_modified_3sat
from rasched.reductions import model_rar4, reduce_graph_balancing
from rasched.sat import CNFFormula, FormulaError, brute_force_sat, lit, to_modified_3sat
from rasched.solver import decide_makespan

UNSAT_CNF = CNFFormula(1, ((lit(1),), (lit(-1),)))


class TestGraphBalancing:
    def test_rejects_unmodified_input(self):
        with pytest.raises(FormulaError):
            reduce_graph_balancing(UNSAT_CNF)

    def test_every_job_has_at_most_two_machines(self):
        rng = random.Random(89)
        f = random_modified_3sat(rng, 4, 3)
        out = reduce_graph_balancing(f)
        assert all(len(out.instance.eligible[j.id]) <= 2 for j in out.instance.jobs)

    def test_dummy_sizes_by_clause_width(self):
        mod = to_modified_3sat(CNFFormula(2, ((lit(1),), (lit(1), lit(2)), (lit(-2),))))
        out = reduce_graph_balancing(mod)
        dummies = {
            int(j.tag.indices[0]): int(j.size)
            for j in out.instance.jobs
            if j.tag.kind == "DummyClause"
        }
        widths = {i: len(c) for i, c in enumerate(mod.clauses, start=1)}
        for i, width in widths.items():
            if width == 3:
                assert i not in dummies
            else:
                assert dummies[i] == 3 - width

    def test_satisfiable_formula_schedulable_at_two(self):
        rng = random.Random(97)
        f = random_modified_3sat(rng, 3, 2)
        assert brute_force_sat(f) is not None
        out = reduce_graph_balancing(f)
        assert decide_makespan(out.instance, 2).found

    def test_unsatisfiable_formula_not_schedulable_at_two(self):
        mod = to_modified_3sat(UNSAT_CNF)
        assert brute_force_sat(mod) is None
        out = reduce_graph_balancing(mod)
        assert decide_makespan(out.instance, 2).verdict.value == "NONE"


class TestModelRar4:
    def test_truth_job_eligible_on_its_two_literal_machines(self):
        mod = to_modified_3sat(CNFFormula(2, ((lit(1), lit(2)), (lit(-1), lit(-2)))))
        inst = model_rar4(mod)
        for j in range(1, mod.num_vars + 1):
            assert eligible_set(inst, f"e{j}") == frozenset({f"u{j}_1", f"u{j}_0"})

    def test_clause_job_eligible_on_clause_and_literal_machine(self):
        mod = to_modified_3sat(CNFFormula(2, ((lit(1), lit(2)), (lit(-1), lit(-2)))))
        inst = model_rar4(mod)
        out = reduce_graph_balancing(mod)
        for job in out.instance.jobs:
            if job.tag.kind == "ClauseJob":
                i, j, alpha = (int(v) for v in job.tag.indices)
                assert eligible_set(inst, job.id) == frozenset({f"v{i}", f"u{j}_{alpha}"})

    def test_eligibility_matches_reference(self):
        rng = random.Random(101)
        for _ in range(15):
            f = random_modified_3sat(rng, rng.randint(3, 4), rng.randint(1, 3))
            gb = reduce_graph_balancing(f).instance
            modeled = to_restricted_assignment(model_rar4(f))
            assert {j.id: gb.eligible[j.id] for j in gb.jobs} == {
                j.id: modeled.eligible[j.id] for j in modeled.jobs
            }
