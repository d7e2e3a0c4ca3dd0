"""Command-line front end.

Every command writes a single artifact (JSON, CSV or a short text line) to
stdout or ``--out``. Exit status: 0 on success, including reported
violations and UNSAT; 1 on domain errors; 2 on malformed input.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import acceptance
from .apxhom import MultiplierHom, check_l1_suite, delta_set, discrepancy_c, eval_f, random_pairs, refute
from .group import MalformedRational, Q1
from .ideal import SizeLimitExceeded, geometric_checkpoints, ideal_trend, pierce_number
from .index import DegenerateInput, IndexElement, enumerate_index, from_points, validate
from .linsolve import LinearSystem, MalformedSystem, format_solution, solve_torus_system

FORMAT = "nonradon/1"


class UsageError(Exception):
    """Malformed input: exit status 2."""


class DomainError(Exception):
    """Well-formed input the mathematics rejects: exit status 1."""


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def parse_rational_list(text: str) -> list[Q1]:
    out, offset = [], 0
    for k, item in enumerate(text.split(",")):
        try:
            out.append(Q1.parse(item))
        except MalformedRational as exc:
            raise UsageError(
                f"item {k + 1} ({item!r}) at character {offset + exc.position}: {exc}"
            ) from exc
        offset += len(item) + 1
    return out


def parse_rational(text: str) -> Q1:
    values = parse_rational_list(text)
    if len(values) != 1:
        raise UsageError(f"expected a single rational, got {text!r}")
    return values[0]


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def _element(obj) -> IndexElement:
    try:
        return IndexElement.from_json(obj)
    except MalformedRational as exc:
        raise UsageError(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad index element: {exc}") from exc


def load_elements(path: str) -> list[IndexElement]:
    """A list of elements, ``{"elements": [...]}``, or a single element."""
    doc = _load(path)
    if isinstance(doc, dict) and "elements" in doc:
        doc = doc["elements"]
    if isinstance(doc, dict):
        return [_element(doc)]
    if not isinstance(doc, list):
        raise UsageError(f"{path}: expected index elements")
    return [_element(e) for e in doc]


def load_single_element(path: str) -> IndexElement:
    elements = load_elements(path)
    if len(elements) != 1:
        raise UsageError(f"{path}: expected exactly one index element, found {len(elements)}")
    return elements[0]


def parse_hom(text: str) -> MultiplierHom:
    try:
        return MultiplierHom.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad homomorphism {text!r}: expected zero, identity, seed:S:C or fixed:c0,c1,...") from exc


# families for ideal-trend -------------------------------------------------------

Member = Callable[[int, IndexElement], bool]


def family(name: str, m_max: int) -> Member:
    """``empty``, ``all``, ``tiny``, ``delta:G:x`` or ``cxy:x:y``."""
    if name == "empty":
        return lambda p, a: False
    if name == "all":
        return lambda p, a: True
    if name == "tiny":
        return lambda p, a: a.region.measure() < Fraction(1, 8)
    head, _, rest = name.partition(":")
    if head == "delta" and rest:
        g_text, _, x_text = rest.rpartition(":")
        g, x = parse_hom(g_text), parse_rational(x_text)
        members = set(delta_set(g, x, enumerate_index(m_max)))
        return lambda p, a: p in members
    if head == "cxy" and rest:
        x_text, _, y_text = rest.partition(":")
        x, y = parse_rational(x_text), parse_rational(y_text)
        members = set(discrepancy_c(x, y, enumerate_index(m_max)))
        return lambda p, a: p in members
    raise UsageError(f"unknown family {name!r}: expected empty, all, tiny, delta:G:x or cxy:x:y")


# commands -----------------------------------------------------------------------


def cmd_gen_index(args) -> tuple[int, str]:
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    elements = enumerate_index(args.count)
    if args.format == "csv":
        rows = ["position,n,balls,points"]
        for p, a in enumerate(elements):
            balls = " ".join(f"{b.center}~{b.to_json()['r']}" for b in a.balls)
            rows.append(f"{p},{a.n},{balls},{' '.join(str(y) for y in a.points)}")
        return 0, "\n".join(rows) + "\n"
    return 0, dump_json([a.to_json() for a in elements])


def _verdict_json(a: IndexElement) -> dict:
    v = validate(a)
    return {
        "valid": v.ok,
        "violation": None if v.ok else {"kind": v.violation.kind, "indices": list(v.violation.indices)},
        "coherent_distinct": v.coherent_distinct,
        "escaping": v.escaping,
    }


def cmd_validate_index(args) -> tuple[int, str]:
    doc = _load(args.file)
    if isinstance(doc, list):
        return 0, dump_json([_verdict_json(_element(e)) for e in doc])
    return 0, dump_json(_verdict_json(_element(doc)))


def cmd_from_points(args) -> tuple[int, str]:
    ys = parse_rational_list(args.points)
    try:
        a = from_points(ys)
    except DegenerateInput as exc:
        raise DomainError(str(exc)) from exc
    return 0, dump_json(a.to_json())


def cmd_solve_system(args) -> tuple[int, str]:
    doc = _load(args.file)
    try:
        system = LinearSystem.from_json(doc)
    except (MalformedSystem, MalformedRational) as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(f"bad system: {exc}") from exc
    x = solve_torus_system(system)
    if args.format == "json":
        return 0, dump_json({"solution": None if x is None else [str(v) for v in x]})
    return 0, format_solution(x) + "\n"


def cmd_pierce(args) -> tuple[int, str]:
    X = load_elements(args.file)
    try:
        result = pierce_number(X, args.limit, heuristic=args.heuristic)
    except SizeLimitExceeded as exc:
        raise DomainError(f"{exc}; pass --heuristic for a greedy upper bound or raise --limit") from exc
    return 0, dump_json(result.to_json())


def _checkpoints(args) -> list[int]:
    if args.m_max < 1:
        raise UsageError("--m-max must be at least 1")
    marks = parse_int_list(args.checkpoints) if args.checkpoints else geometric_checkpoints(args.m_max)
    if any(m < 1 for m in marks):
        raise UsageError("checkpoints must be positive")
    return sorted({m for m in marks if m <= args.m_max} | {args.m_max})


def cmd_ideal_trend(args) -> tuple[int, str]:
    marks = _checkpoints(args)
    member = family(args.family, args.m_max)
    params = {"family": args.family, "m_max": args.m_max}
    report = ideal_trend(member, marks, limit=args.limit, jobs=args.jobs, params=params)
    if args.format == "json":
        return 0, dump_json({"format": FORMAT, **report.to_json()})
    return 0, report.to_csv()


def cmd_eval_f(args) -> tuple[int, str]:
    a = load_single_element(args.indexfile)
    x = parse_rational(args.x)
    i = a.locate(x)
    return 0, dump_json({"x": str(x), "ball": i, "value": str(eval_f(a, x))})


def cmd_check_l1(args) -> tuple[int, str]:
    if args.pairs < 0 or args.prefix < 0 or args.max_denominator < 1:
        raise UsageError("--pairs and --prefix must be nonnegative, --max-denominator positive")
    prefix = enumerate_index(args.prefix)
    reports = check_l1_suite(random_pairs(args.pairs, args.seed, args.max_denominator), prefix)
    ok = all(r.ok for r in reports)
    if args.format == "csv":
        rows = ["x,y,discrepancies,violations,witness_ok"]
        rows += [f"{r.x},{r.y},{len(r.discrepancies)},{len(r.violations)},{str(r.witness_ok).lower()}" for r in reports]
        return (0 if ok else 1), "\n".join(rows) + "\n"
    doc = {
        "format": FORMAT,
        "params": {"pairs": args.pairs, "prefix": args.prefix, "seed": args.seed, "max_denominator": args.max_denominator},
        "ok": ok,
        "pairs": [r.to_json() for r in reports],
    }
    return (0 if ok else 1), dump_json(doc)


def cmd_refute(args) -> tuple[int, str]:
    g = parse_hom(args.g)
    samples = parse_rational_list(args.samples)
    marks = _checkpoints(args)
    report = refute(g, samples, args.m_max, marks, limit=args.limit, jobs=args.jobs)
    if args.format == "csv":
        return 0, report.to_csv()
    return 0, dump_json({"format": FORMAT, **report.to_json()})


def determinism_examples(workdir: Path) -> list[list[str]]:
    """Representative invocations over fixture files written into ``workdir``."""
    a0 = acceptance.A0.to_json()
    a1 = {"n": 1, "balls": [{"c": "0/1", "r": "3/8"}], "points": ["0/1"]}
    a2 = {"n": 1, "balls": [{"c": "1/2", "r": "5/32"}], "points": ["1/2"]}
    system = {"B": [[1, 1]], "r": ["1/2"], "balls": [{"c": "1/8", "r": "1/16"}, {"c": "3/8", "r": "1/16"}]}
    files = {"a0.json": a0, "empty.json": [], "pair.json": [a1, a2], "system.json": system}
    for name, doc in files.items():
        (workdir / name).write_text(dump_json(doc))
    w = str(workdir)
    return [
        ["from-points", "0/1,1/2"],
        ["gen-index", "--count", "25"],
        ["validate-index", f"{w}/a0.json"],
        ["solve-system", f"{w}/system.json"],
        ["pierce", f"{w}/empty.json"],
        ["pierce", f"{w}/pair.json"],
        ["eval-f", f"{w}/a0.json", "1/16"],
        ["ideal-trend", "--family", "tiny", "--m-max", "200", "--checkpoints", "25,50,100,200"],
        ["ideal-trend", "--family", "delta:zero:1/5", "--m-max", "200"],
        ["check-l1", "--pairs", "5", "--prefix", "60"],
        ["refute", "--g", "seed:3:5", "--samples", "1/5,7/64", "--m-max", "200", "--csv"],
    ]


def cmd_selftest(args) -> tuple[int, str]:
    import tempfile

    wanted = parse_int_list(args.only) if args.only else list(range(1, 9))
    unknown = [k for k in wanted if k not in acceptance.SUITES and k != 8]
    if unknown:
        raise UsageError(f"unknown criteria {unknown}")
    outcomes = []
    for k in wanted:
        if k == 7:
            outcomes.append(acceptance.refutation(jobs=args.jobs))
        elif k == 8:
            with tempfile.TemporaryDirectory() as tmp:
                outcomes.append(acceptance.determinism(run, determinism_examples(Path(tmp))))
        else:
            outcomes.append(acceptance.SUITES[k]())
    ok = all(o.ok for o in outcomes)
    if args.format == "json":
        doc = {"format": FORMAT, "ok": ok, "criteria": [o.__dict__ for o in outcomes]}
        return (0 if ok else 1), dump_json(doc)
    lines = [o.line() for o in outcomes]
    lines.append(f"{sum(o.ok for o in outcomes)}/{len(outcomes)} criteria passed")
    return (0 if ok else 1), "\n".join(lines) + "\n"


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="emit JSON")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv", help="emit CSV")
    common.add_argument("--out", help="write the artifact here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker threads (output does not depend on it)")
    common.add_argument(
        "--limit", type=int, default=None,
        help="exact pierce size bound (default from NONRADON_EXACT_LIMIT, else 64)",
    )

    parser = argparse.ArgumentParser(prog="nonradon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("gen-index", cmd_gen_index, "first M elements of the canonical enumeration")
    p.add_argument("--count", type=int, required=True, metavar="M")

    p = add("validate-index", cmd_validate_index, "check an index element (or a list) against the coherence clauses")
    p.add_argument("file")

    p = add("from-points", cmd_from_points, "the element built around distinct points, e.g. \"0/1,1/2\"")
    p.add_argument("points")

    p = add("solve-system", cmd_solve_system, "solve B x = r on the torus with closed-ball constraints")
    p.add_argument("file")

    p = add("pierce", cmd_pierce, "minimum escaping witness for a set of index elements")
    p.add_argument("file")
    p.add_argument("--heuristic", action="store_true", help="fall back to greedy above --limit")

    p = add("ideal-trend", cmd_ideal_trend, "pierce numbers of a family along enumeration prefixes")
    p.add_argument("--family", required=True, metavar="NAME", help="empty, all, tiny, delta:G:x or cxy:x:y")
    p.add_argument("--m-max", type=int, required=True, metavar="M")
    p.add_argument("--checkpoints", metavar="LIST", help="comma-separated prefix lengths")

    p = add("eval-f", cmd_eval_f, "evaluate the coordinate map of one index element at x")
    p.add_argument("indexfile")
    p.add_argument("x")

    p = add("check-l1", cmd_check_l1, "approximate additivity on random pairs over an enumeration prefix")
    p.add_argument("--pairs", type=int, required=True, metavar="N")
    p.add_argument("--prefix", type=int, required=True, metavar="M")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-denominator", type=int, default=120)

    p = add("refute", cmd_refute, "growth of the disagreement sets of a candidate homomorphism")
    p.add_argument("--g", required=True, help="zero, identity, seed:S:C or fixed:c0,c1,...")
    p.add_argument("--samples", required=True, metavar="LIST")
    p.add_argument("--m-max", type=int, required=True, metavar="M")
    p.add_argument("--checkpoints", metavar="LIST")

    p = add("selftest", cmd_selftest, "run the acceptance suites")
    p.add_argument("--only", metavar="LIST", help="comma-separated criterion numbers")
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        print("nonradon: error: --jobs must be at least 1", file=stderr)
        return 2
    try:
        code, text = args.handler(args)
    except UsageError as exc:
        print(f"nonradon {args.command}: error: {exc}", file=stderr)
        return 2
    except DomainError as exc:
        print(f"nonradon {args.command}: {exc}", file=stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return code


def run(argv: Sequence[str]) -> tuple[int, bytes]:
    """In-process invocation returning the exit status and the emitted bytes."""
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue().encode()


if __name__ == "__main__":
    sys.exit(main())
