"""Line-oriented textual formats for instances, schedules, formulas, matchings.

One record per line, exact rationals written as ``p/q`` or plain integers.
Blank lines and ``#`` comments are ignored, except that ``# target``,
``# kind`` and ``# meta`` comments carry reduction metadata and round-trip.
``parse(emit(x))`` is the identity on every object the module emits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    Instance,
    Job,
    LRSInstance,
    RAIInstance,
    RAInstance,
    RARInstance,
    SchedError,
    Schedule,
    rai_from_ra,
)
from .matching import ThreeDM, ThreeDMStar, element_token, parse_element
from .meta import GadgetMeta
from .sat import (
    ClauseKind,
    CNFFormula,
    Literal,
    OneInThreeFormula,
    StarClause,
    StarFormula,
    lit,
)


class ParseError(SchedError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def emit_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {token!r}: {exc}") from None


def _meta_line(obj_id: str, info: GadgetMeta) -> str:
    indices = ",".join(str(v) for v in info.indices) if info.indices else "-"
    config = "-" if info.truth_config is None else ("T" if info.truth_config else "F")
    return f"# meta {obj_id} {info.kind} {indices} {config}"


def _parse_meta_tokens(tokens: list[str], line_no: int) -> tuple[str, GadgetMeta]:
    if len(tokens) != 4:
        raise ParseError(line_no, "meta lines need id, kind, indices, config")
    obj_id, kind, idx_tok, cfg_tok = tokens
    indices: tuple[int | str, ...] = ()
    if idx_tok != "-":
        parsed = []
        for t in idx_tok.split(","):
            parsed.append(int(t) if t.lstrip("-").isdigit() else t)
        indices = tuple(parsed)
    if cfg_tok == "-":
        config = None
    elif cfg_tok in ("T", "F"):
        config = cfg_tok == "T"
    else:
        raise ParseError(line_no, f"bad truth configuration {cfg_tok!r}")
    try:
        return obj_id, GadgetMeta(kind, indices, config)
    except ValueError as exc:
        raise ParseError(line_no, str(exc)) from None


@dataclass
class _Lines:
    """Token stream that strips blanks and plain comments."""

    records: list[tuple[int, list[str]]]
    target: Fraction | None = None
    kind: str | None = None
    meta: dict[str, GadgetMeta] | None = None


def _scan(text: str) -> _Lines:
    records: list[tuple[int, list[str]]] = []
    target: Fraction | None = None
    kind: str | None = None
    meta: dict[str, GadgetMeta] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            tokens = line[1:].split()
            if tokens[:1] == ["target"]:
                if len(tokens) != 2:
                    raise ParseError(line_no, "target comment needs one value")
                target = parse_rational(tokens[1])
            elif tokens[:1] == ["kind"]:
                if len(tokens) != 2:
                    raise ParseError(line_no, "kind comment needs one value")
                kind = tokens[1]
            elif tokens[:1] == ["meta"]:
                obj_id, info = _parse_meta_tokens(tokens[1:], line_no)
                meta[obj_id] = info
            continue
        records.append((line_no, line.split()))
    return _Lines(records, target, kind, meta or {})


@dataclass(frozen=True)
class ParsedInstance:
    instance: Instance
    kind: str | None
    target: Fraction | None
    meta: dict[str, GadgetMeta]


def _meta_block(meta: dict[str, GadgetMeta] | None, instance: Instance) -> list[str]:
    merged: dict[str, GadgetMeta] = {}
    if not isinstance(instance, LRSInstance):
        jobs = instance.jobs if not isinstance(instance, RAIInstance) else instance.base.jobs
        for job in jobs:
            if job.tag is not None:
                merged[job.id] = job.tag
    if meta:
        merged.update(meta)
    return [_meta_line(obj_id, info) for obj_id, info in sorted(merged.items())]


def emit_instance(
    instance: Instance,
    kind: str | None = None,
    target: Fraction | int | None = None,
    meta: dict[str, GadgetMeta] | None = None,
) -> str:
    lines: list[str] = []
    if isinstance(instance, RAIInstance):
        inner: Instance = instance.base
        machines = instance.order
    else:
        inner = instance
        machines = instance.machines

    if isinstance(inner, RAInstance):
        lines.append(f"RA {len(machines)} {len(inner.jobs)}")
    elif isinstance(inner, RARInstance):
        lines.append(f"RAR {inner.resource_count} {len(machines)} {len(inner.jobs)}")
    elif isinstance(inner, LRSInstance):
        lines.append(f"LRS {inner.dimension} {len(machines)} {len(inner.jobs)}")
    else:
        raise TypeError(f"cannot emit {instance!r}")

    if kind is not None:
        lines.append(f"# kind {kind}")
    if target is not None:
        lines.append(f"# target {emit_rational(Fraction(target))}")
    lines.extend(_meta_block(meta, instance))

    if isinstance(inner, RAInstance):
        lines.extend(f"machine {mid}" for mid in machines)
        for job in inner.jobs:
            elig = sorted(inner.eligible[job.id])
            lines.append(
                f"job {job.id} {emit_rational(job.size)} {len(elig)} " + " ".join(elig)
            )
    elif isinstance(inner, RARInstance):
        for mid in machines:
            caps = " ".join(emit_rational(c) for c in inner.capacities[mid])
            lines.append(f"machine {mid} {caps}")
        for job in inner.jobs:
            dem = " ".join(emit_rational(d) for d in inner.demands[job.id])
            lines.append(f"job {job.id} {emit_rational(job.size)} {dem}")
    else:
        for mid in machines:
            spd = " ".join(emit_rational(v) for v in inner.speeds[mid])
            lines.append(f"machine {mid} {spd}")
        for jid in inner.jobs:
            siz = " ".join(emit_rational(s) for s in inner.sizes[jid])
            lines.append(f"job {jid} {siz}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> ParsedInstance:
    scan = _scan(text)
    if not scan.records:
        raise ParseError(0, "empty document")
    line_no, header = scan.records[0]
    records = scan.records[1:]
    meta = dict(scan.meta or {})

    def job_tag(job_id: str) -> GadgetMeta | None:
        return meta.get(job_id)

    fmt = header[0]
    if fmt == "RA":
        if len(header) != 3:
            raise ParseError(line_no, "RA header needs machine and job counts")
        m, n = int(header[1]), int(header[2])
        machines: list[str] = []
        jobs: list[Job] = []
        eligible: dict[str, frozenset[str]] = {}
        for ln, toks in records:
            if toks[0] == "machine":
                if len(toks) != 2:
                    raise ParseError(ln, "machine lines carry just an id")
                machines.append(toks[1])
            elif toks[0] == "job":
                if len(toks) < 4:
                    raise ParseError(ln, "job lines need id, size and eligible list")
                jid, size, k = toks[1], parse_rational(toks[2]), int(toks[3])
                elig = toks[4 : 4 + k]
                if len(elig) != k:
                    raise ParseError(ln, "eligible list shorter than announced")
                jobs.append(Job(jid, size, job_tag(jid)))
                eligible[jid] = frozenset(elig)
            else:
                raise ParseError(ln, f"unexpected record {toks[0]!r}")
        if len(machines) != m or len(jobs) != n:
            raise ParseError(line_no, "header counts do not match records")
        instance: Instance = RAInstance(tuple(machines), tuple(jobs), eligible)
        if scan.kind == "rai":
            instance = rai_from_ra(instance)
    elif fmt == "RAR":
        if len(header) != 4:
            raise ParseError(line_no, "RAR header needs R, machine and job counts")
        r, m, n = int(header[1]), int(header[2]), int(header[3])
        machines = []
        caps: dict[str, tuple[Fraction, ...]] = {}
        jobs = []
        demands: dict[str, tuple[Fraction, ...]] = {}
        for ln, toks in records:
            if toks[0] == "machine":
                if len(toks) != 2 + r:
                    raise ParseError(ln, f"machine lines need {r} capacities")
                machines.append(toks[1])
                caps[toks[1]] = tuple(parse_rational(t) for t in toks[2:])
            elif toks[0] == "job":
                if len(toks) != 3 + r:
                    raise ParseError(ln, f"job lines need size and {r} demands")
                jid = toks[1]
                jobs.append(Job(jid, parse_rational(toks[2]), job_tag(jid)))
                demands[jid] = tuple(parse_rational(t) for t in toks[3:])
            else:
                raise ParseError(ln, f"unexpected record {toks[0]!r}")
        if len(machines) != m or len(jobs) != n:
            raise ParseError(line_no, "header counts do not match records")
        instance = RARInstance(r, tuple(machines), caps, tuple(jobs), demands)
    elif fmt == "LRS":
        if len(header) != 4:
            raise ParseError(line_no, "LRS header needs D, machine and job counts")
        d, m, n = int(header[1]), int(header[2]), int(header[3])
        machines = []
        speeds: dict[str, tuple[Fraction, ...]] = {}
        job_ids: list[str] = []
        sizes: dict[str, tuple[Fraction, ...]] = {}
        for ln, toks in records:
            if toks[0] == "machine":
                if len(toks) != 2 + d:
                    raise ParseError(ln, f"machine lines need {d} speeds")
                machines.append(toks[1])
                speeds[toks[1]] = tuple(parse_rational(t) for t in toks[2:])
            elif toks[0] == "job":
                if len(toks) != 2 + d:
                    raise ParseError(ln, f"job lines need {d} sizes")
                job_ids.append(toks[1])
                sizes[toks[1]] = tuple(parse_rational(t) for t in toks[2:])
            else:
                raise ParseError(ln, f"unexpected record {toks[0]!r}")
        if len(machines) != m or len(job_ids) != n:
            raise ParseError(line_no, "header counts do not match records")
        instance = LRSInstance(d, tuple(machines), speeds, tuple(job_ids), sizes)
    else:
        raise ParseError(line_no, f"unknown instance format {fmt!r}")
    return ParsedInstance(instance, scan.kind, scan.target, meta)


def emit_schedule(schedule: Schedule) -> str:
    lines = ["SCHED"]
    lines.extend(f"assign {j} {m}" for j, m in schedule.items())
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> Schedule:
    scan = _scan(text)
    if not scan.records or scan.records[0][1] != ["SCHED"]:
        raise ParseError(scan.records[0][0] if scan.records else 0, "expected SCHED")
    assignment: dict[str, str] = {}
    for ln, toks in scan.records[1:]:
        if toks[0] != "assign" or len(toks) != 3:
            raise ParseError(ln, "expected: assign <job> <machine>")
        if toks[1] in assignment:
            raise ParseError(ln, f"job {toks[1]} assigned twice")
        assignment[toks[1]] = toks[2]
    return Schedule(assignment)


def _emit_literal(l: Literal) -> str:
    return str(int(l))


def emit_formula(formula: StarFormula | OneInThreeFormula | CNFFormula) -> str:
    if isinstance(formula, StarFormula):
        lines = [f"STAR {formula.num_vars} {formula.num_one_clauses}"]
        for clause in formula.clauses:
            word = "1in3" if clause.kind is ClauseKind.ONE_IN_THREE else "2in3"
            lines.append(word + " " + " ".join(_emit_literal(l) for l in clause.literals))
    elif isinstance(formula, OneInThreeFormula):
        lines = [f"ONEIN3 {formula.num_vars} {len(formula.clauses)}"]
        for clause in formula.clauses:
            lines.append("1in3 " + " ".join(_emit_literal(l) for l in clause))
    elif isinstance(formula, CNFFormula):
        lines = [f"CNF {formula.num_vars} {len(formula.clauses)}"]
        for clause in formula.clauses:
            lines.append("or " + " ".join(_emit_literal(l) for l in clause))
    else:
        raise TypeError(f"cannot emit {formula!r}")
    return "\n".join(lines) + "\n"


def parse_formula(text: str) -> StarFormula | OneInThreeFormula | CNFFormula:
    scan = _scan(text)
    if not scan.records:
        raise ParseError(0, "empty document")
    line_no, header = scan.records[0]
    if len(header) != 3:
        raise ParseError(line_no, "formula headers carry two counts")
    fmt, n = header[0], int(header[1])

    def literals(ln: int, toks: list[str]) -> tuple[Literal, ...]:
        try:
            return tuple(lit(int(t)) for t in toks)
        except ValueError as exc:
            raise ParseError(ln, str(exc)) from None

    if fmt == "STAR":
        clauses = []
        for ln, toks in scan.records[1:]:
            if toks[0] not in ("1in3", "2in3") or len(toks) != 4:
                raise ParseError(ln, "expected: 1in3|2in3 and three literals")
            kind = ClauseKind.ONE_IN_THREE if toks[0] == "1in3" else ClauseKind.TWO_IN_THREE
            clauses.append(StarClause(literals(ln, toks[1:]), kind))
        return StarFormula(n, tuple(clauses))
    if fmt == "ONEIN3":
        one_clauses = []
        for ln, toks in scan.records[1:]:
            if toks[0] != "1in3" or len(toks) != 4:
                raise ParseError(ln, "expected: 1in3 and three literals")
            one_clauses.append(literals(ln, toks[1:]))
        return OneInThreeFormula(n, tuple(one_clauses))
    if fmt == "CNF":
        cnf_clauses = []
        for ln, toks in scan.records[1:]:
            if toks[0] != "or" or len(toks) < 2:
                raise ParseError(ln, "expected: or and at least one literal")
            cnf_clauses.append(literals(ln, toks[1:]))
        return CNFFormula(n, tuple(cnf_clauses))
    raise ParseError(line_no, f"unknown formula format {fmt!r}")


def emit_matching(instance: ThreeDM | ThreeDMStar) -> str:
    if isinstance(instance, ThreeDM):
        lines = [f"3DM {instance.n}"]
        for (i, j, k) in instance.triplets:
            lines.append(f"triplet a{i} b{j} c{k}")
    elif isinstance(instance, ThreeDMStar):
        lines = [f"3DMSTAR {instance.n}"]
        for triplet in instance.e1:
            lines.append("e1 " + " ".join(element_token(x) for x in triplet))
    else:
        raise TypeError(f"cannot emit {instance!r}")
    return "\n".join(lines) + "\n"


def parse_matching(text: str) -> ThreeDM | ThreeDMStar:
    scan = _scan(text)
    if not scan.records:
        raise ParseError(0, "empty document")
    line_no, header = scan.records[0]
    if len(header) != 2:
        raise ParseError(line_no, "matching headers carry the set size")
    fmt, n = header[0], int(header[1])
    if fmt == "3DM":
        triplets = []
        for ln, toks in scan.records[1:]:
            if toks[0] != "triplet" or len(toks) != 4:
                raise ParseError(ln, "expected: triplet a<i> b<j> c<k>")
            elems = [parse_element(t) for t in toks[1:]]
            if [e[0] for e in elems] != ["a", "b", "c"]:
                raise ParseError(ln, "triplet elements must be a, b, c in order")
            triplets.append((elems[0][1], elems[1][1], elems[2][1]))
        return ThreeDM(n, tuple(triplets))
    if fmt == "3DMSTAR":
        e1 = []
        for ln, toks in scan.records[1:]:
            if toks[0] != "e1" or len(toks) != 4:
                raise ParseError(ln, "expected: e1 and three elements")
            e1.append(tuple(parse_element(t) for t in toks[1:]))
        return ThreeDMStar(n, tuple(e1))
    raise ParseError(line_no, f"unknown matching format {fmt!r}")


def parse_document(text: str):
    """Parse any of the module's formats, dispatching on the header word."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word = line.split()[0]
        break
    else:
        raise ParseError(0, "empty document")
    if word in ("RA", "RAR", "LRS"):
        return parse_instance(text)
    if word in ("STAR", "ONEIN3", "CNF"):
        return parse_formula(text)
    if word in ("3DM", "3DMSTAR"):
        return parse_matching(text)
    if word == "SCHED":
        return parse_schedule(text)
    raise ParseError(1, f"unknown document format {word!r}")
