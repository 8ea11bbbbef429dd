"""Command line front end.

Subcommands: gen, reduce, solve, roundtrip, verify, counterexample.  Exit
codes: 0 for success / FOUND / PASS, 1 for NONE / FAIL, 2 for an exhausted
budget, 3 for usage or parse errors.  All randomness sits behind --seed, so
identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import generate
from .claims import check_claims
from .core import (
    LRSInstance,
    RAIInstance,
    RAInstance,
    RARInstance,
    SchedError,
    evaluate,
    rai_from_ra,
    to_restricted_assignment,
)
from .formats import (
    ParseError,
    ParsedInstance,
    emit_formula,
    emit_instance,
    emit_matching,
    emit_rational,
    emit_schedule,
    parse_document,
    parse_formula,
    parse_instance,
    parse_matching,
    parse_schedule,
)
from .matching import ThreeDM, ThreeDMStar, brute_force_match
from .reductions import (
    ReductionOutput,
    bhaskara_counterexample,
    build_bhaskara,
    build_schedule_rai,
    build_schedule_simple,
    counterexample_matching,
    extract_assignment_rai,
    extract_assignment_simple,
    model_rar4,
    model_rar6,
    ra_to_rar_m,
    rai_to_rar2,
    rar_to_lrs,
    reduce_graph_balancing,
    reduce_lst,
    reduce_rai,
    reduce_rar2,
    reduce_rar3,
    reduce_simple,
)
from .sat import CNFFormula, OneInThreeFormula, StarFormula, brute_force_sat
from .solver import SolveBudget, Verdict, decide_exact_load, decide_makespan, decide_min_load, enumerate_exact

EXIT_OK = 0
EXIT_NO = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read(path: str) -> str:
    return Path(path).read_text()


def _budget(args) -> SolveBudget:
    kwargs = {}
    if args.nodes is not None:
        kwargs["max_nodes"] = args.nodes
    if args.time is not None:
        kwargs["max_seconds"] = args.time
    if getattr(args, "enum_cap", None) is not None:
        kwargs["max_schedules"] = args.enum_cap
    return SolveBudget(**kwargs)


def _cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    kind = args.kind
    if kind == "star":
        obj = (
            generate.minimal_star_formula()
            if args.minimal
            else generate.random_star_formula(rng, args.vars)
        )
        _write(emit_formula(obj), args.out)
    elif kind == "1in3":
        obj = generate.random_one_in_three(rng, args.vars, args.clauses)
        _write(emit_formula(obj), args.out)
    elif kind == "3sat":
        _write(emit_formula(generate.random_3sat(rng, args.vars, args.clauses)), args.out)
    elif kind == "mod3sat":
        _write(
            emit_formula(generate.random_modified_3sat(rng, args.vars, args.clauses)),
            args.out,
        )
    elif kind == "3dm":
        obj = (
            counterexample_matching()
            if args.counterexample
            else generate.random_3dm(rng, args.n, args.triplets)
        )
        _write(emit_matching(obj), args.out)
    elif kind == "3dmstar":
        _write(emit_matching(generate.random_3dm_star(rng, args.n, args.extra)), args.out)
    else:
        raise SchedError(f"unknown generator kind {kind!r}")
    return EXIT_OK


def _reduce_object(kind: str, source, eps, big) -> tuple:
    """Returns (instance, emit kind, target, meta)."""
    if kind == "simple":
        out = reduce_simple(_expect(source, StarFormula))
        return out.instance, out.kind, out.target, out.meta
    if kind == "rai":
        out = reduce_rai(_expect(source, StarFormula))
        return out.instance, out.kind, out.target, out.meta
    if kind == "lst":
        out = reduce_lst(_expect(source, ThreeDM))
        return out.instance, out.kind, out.target, out.meta
    if kind == "rar6":
        inst = model_rar6(_expect(source, ThreeDM))
        return inst, "rar6", Fraction(2), {}
    if kind == "gb":
        out = reduce_graph_balancing(_expect(source, CNFFormula))
        return out.instance, out.kind, out.target, out.meta
    if kind == "rar4":
        inst = model_rar4(_expect(source, CNFFormula))
        return inst, "rar4", Fraction(2), {}
    if kind == "rar3":
        out = reduce_rar3(_expect(source, ThreeDM))
        return out.instance, out.kind, out.target, out.meta
    if kind == "rar2":
        out = reduce_rar2(_expect(source, ThreeDMStar))
        return out.instance, out.kind, out.target, out.meta
    if kind == "rai2rar2":
        parsed = _expect(source, ParsedInstance)
        inst = parsed.instance
        if isinstance(inst, RAInstance):
            inst = rai_from_ra(inst)
        if not isinstance(inst, RAIInstance):
            raise SchedError("rai2rar2 needs an interval instance")
        return rai_to_rar2(inst), "rai2rar2", parsed.target, parsed.meta
    if kind == "ra2rarm":
        parsed = _expect(source, ParsedInstance)
        inst = parsed.instance
        if isinstance(inst, RAIInstance):
            inst = inst.base
        if not isinstance(inst, RAInstance):
            raise SchedError("ra2rarm needs a restricted assignment instance")
        return ra_to_rar_m(inst), "ra2rarm", parsed.target, parsed.meta
    if kind == "rar2lrs":
        parsed = _expect(source, ParsedInstance)
        if not isinstance(parsed.instance, RARInstance):
            raise SchedError("rar2lrs needs a resource-restricted instance")
        if eps is None or big is None:
            raise SchedError("rar2lrs needs --eps and --K")
        return rar_to_lrs(parsed.instance, eps, big), "rar2lrs", parsed.target, parsed.meta
    if kind == "bhaskara":
        dm = _expect(source, ThreeDM)
        if eps is None:
            raise SchedError("bhaskara needs --eps")
        return build_bhaskara(dm, eps), "bhaskara", None, {}
    raise SchedError(f"unknown reduction kind {kind!r}")


def _expect(obj, cls):
    if not isinstance(obj, cls):
        raise SchedError(f"input is a {type(obj).__name__}, expected {cls.__name__}")
    return obj


def _cmd_reduce(args) -> int:
    source = parse_document(_read(args.input))
    eps = Fraction(args.eps) if args.eps is not None else None
    big = Fraction(args.K) if args.K is not None else None
    instance, kind, target, meta = _reduce_object(args.kind, source, eps, big)
    if args.target is not None:
        target = Fraction(args.target)
    _write(emit_instance(instance, kind=kind, target=target, meta=meta), args.out)
    return EXIT_OK


def _verdict_exit(verdict: Verdict) -> int:
    return {Verdict.FOUND: EXIT_OK, Verdict.NONE: EXIT_NO, Verdict.BUDGET: EXIT_BUDGET}[
        verdict
    ]


def _cmd_solve(args) -> int:
    parsed = parse_instance(_read(args.input))
    instance = parsed.instance
    if isinstance(instance, LRSInstance):
        raise SchedError("solving low rank instances is not supported")
    target = Fraction(args.target) if args.target is not None else parsed.target
    if target is None:
        raise SchedError("no --target given and the file carries none")
    budget = _budget(args)

    if args.enumerate:
        schedules, complete = enumerate_exact(
            instance, target, cap=args.enum_cap, budget=budget
        )
        sys.stdout.write(f"SCHEDULES {len(schedules)} {'complete' if complete else 'partial'}\n")
        for s in schedules:
            sys.stdout.write(emit_schedule(s))
        return EXIT_OK if complete else EXIT_BUDGET

    decide = {
        "makespan": decide_makespan,
        "exact": decide_exact_load,
        "santa": decide_min_load,
    }[args.mode]
    result = decide(instance, target, budget=budget, workers=args.jobs)
    sys.stdout.write(result.verdict.value + "\n")
    if result.found and result.schedule is not None:
        out_text = emit_schedule(result.schedule)
        if args.out is not None:
            Path(args.out).write_text(out_text)
        else:
            sys.stdout.write(out_text)
    return _verdict_exit(result.verdict)


_ROUNDTRIP_SAT = {"simple", "rai", "gb"}
_ROUNDTRIP_MATCH = {"lst", "rar3", "rar6"}
_ROUNDTRIP_STAR_MATCH = {"rar2"}


def _cmd_roundtrip(args) -> int:
    source = parse_document(_read(args.input))
    budget = _budget(args)
    kind = args.kind

    if kind in _ROUNDTRIP_SAT:
        witness = brute_force_sat(_expect(source, StarFormula if kind != "gb" else CNFFormula))
        source_yes = witness is not None
    elif kind in _ROUNDTRIP_MATCH:
        cert = brute_force_match(_expect(source, ThreeDM))
        source_yes = cert is not None
    elif kind in _ROUNDTRIP_STAR_MATCH:
        cert = brute_force_match(_expect(source, ThreeDMStar))
        source_yes = cert is not None
    else:
        raise SchedError(f"unknown roundtrip kind {kind!r}")

    instance, _, target, meta = _reduce_object(kind, source, None, None)
    if kind in ("gb", "rar4"):
        result = decide_makespan(instance, target, budget=budget, workers=args.jobs)
    else:
        result = decide_exact_load(instance, target, budget=budget, workers=args.jobs)
    if result.verdict is Verdict.BUDGET:
        sys.stdout.write("BUDGET\n")
        return EXIT_BUDGET
    solver_yes = result.found

    consistent = True
    if source_yes and kind in ("simple", "rai"):
        out = (reduce_simple if kind == "simple" else reduce_rai)(source)
        build = build_schedule_simple if kind == "simple" else build_schedule_rai
        extract = extract_assignment_simple if kind == "simple" else extract_assignment_rai
        schedule = build(out, witness)
        extracted = extract(out, schedule)
        consistent = extracted == witness and source.satisfied(extracted)

    ok = (source_yes == solver_yes) and consistent
    sys.stdout.write("PASS\n" if ok else "FAIL\n")
    return EXIT_OK if ok else EXIT_NO


def _cmd_verify(args) -> int:
    parsed = parse_instance(_read(args.instance))
    schedule = parse_schedule(_read(args.schedule))
    profile = evaluate(parsed.instance, schedule)
    for mid in parsed.instance.machines:
        sys.stdout.write(f"load {mid} {emit_rational(profile.loads[mid])}\n")
    sys.stdout.write(f"makespan {emit_rational(profile.makespan)}\n")
    sys.stdout.write(f"minload {emit_rational(profile.min_load)}\n")

    ok = True
    if parsed.kind is not None and parsed.target is not None:
        out = ReductionOutput(
            parsed.kind, parsed.instance, parsed.target, parsed.meta
        )
        report = check_claims(out, schedule)
        for check in report.checks:
            status = "pass" if check.passed else "FAIL"
            line = f"claim {check.claim_id} {status}"
            if check.witness:
                line += f" ({check.witness})"
            sys.stdout.write(line + "\n")
        ok = report.all_passed
    return EXIT_OK if ok else EXIT_NO


def _cmd_counterexample(args) -> int:
    eps = Fraction(args.eps)
    dm, schedule = bhaskara_counterexample(eps)
    lrs = build_bhaskara(dm, eps)
    profile = evaluate(lrs, schedule)
    cert = brute_force_match(dm)

    if args.out is not None:
        directory = Path(args.out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "matching.txt").write_text(emit_matching(dm))
        (directory / "instance.txt").write_text(emit_instance(lrs, kind="bhaskara"))
        (directory / "schedule.txt").write_text(emit_schedule(schedule))

    sys.stdout.write(f"matching {'FOUND' if cert else 'NONE'}\n")
    for mid in lrs.machines:
        sys.stdout.write(f"load {mid} {emit_rational(profile.loads[mid])}\n")
    sys.stdout.write(f"makespan {emit_rational(profile.makespan)}\n")
    threshold = Fraction(309, 100) + 3 * eps
    sys.stdout.write(f"threshold {emit_rational(threshold)}\n")
    refuted = cert is None and profile.makespan <= threshold
    sys.stdout.write("REFUTED\n" if refuted else "NOT-REFUTED\n")
    return EXIT_OK if refuted else EXIT_NO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rasched")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a formula or matching instance")
    g.add_argument("--kind", required=True, choices=["1in3", "star", "3sat", "mod3sat", "3dm", "3dmstar"])
    g.add_argument("--vars", type=int, default=3)
    g.add_argument("--clauses", type=int, default=2)
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--triplets", type=int, default=5)
    g.add_argument("--extra", type=int, default=1)
    g.add_argument("--minimal", action="store_true", help="the fixed smallest star formula")
    g.add_argument("--counterexample", action="store_true", help="the fixed no-cover matching instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=_cmd_gen)

    r = sub.add_parser("reduce", help="construct a scheduling instance")
    r.add_argument("input")
    r.add_argument(
        "--kind",
        required=True,
        choices=[
            "simple",
            "rai",
            "lst",
            "rar6",
            "gb",
            "rar4",
            "rar3",
            "rar2",
            "rai2rar2",
            "ra2rarm",
            "rar2lrs",
            "bhaskara",
        ],
    )
    r.add_argument("--eps")
    r.add_argument("--K")
    r.add_argument("--target")
    r.add_argument("--out")
    r.set_defaults(func=_cmd_reduce)

    s = sub.add_parser("solve", help="decide a load target")
    s.add_argument("input")
    s.add_argument("--mode", choices=["makespan", "exact", "santa"], default="exact")
    s.add_argument("--target")
    s.add_argument("--nodes", type=int)
    s.add_argument("--time", type=float)
    s.add_argument("--enumerate", action="store_true")
    s.add_argument("--enum-cap", type=int, dest="enum_cap")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_solve)

    t = sub.add_parser("roundtrip", help="source oracle versus solver verdict")
    t.add_argument("input")
    t.add_argument("--kind", required=True)
    t.add_argument("--nodes", type=int)
    t.add_argument("--time", type=float)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--jobs", type=int, default=1)
    t.set_defaults(func=_cmd_roundtrip)

    v = sub.add_parser("verify", help="loads and structural claims of a schedule")
    v.add_argument("instance")
    v.add_argument("schedule")
    v.set_defaults(func=_cmd_verify)

    c = sub.add_parser("counterexample", help="emit the low rank refutation bundle")
    c.add_argument("--eps", default="1/2")
    c.add_argument("--out")
    c.set_defaults(func=_cmd_counterexample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, SchedError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
