"""Command-line front end.

Exit codes: 0 success (accepted, true, SAT, all expectations pass), 1 semantic
rejection (rejected, false, UNSAT, a failing expectation), 2 usage or input
error, 3 a search or evaluation budget was exceeded.
"""

from __future__ import annotations

import argparse
import sys
import threading
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .errors import (
    BoundsTooLarge,
    HorizonExceeded,
    JtoError,
    PositionDependence,
    TooManyAtoms,
)
from .kernel import Registry, check_proof
from .models import FittingModel, load_model
from .parser import parse_formula, parse_formula_file
from .printer import pretty
from .scriptio import load_cs, load_script, resolve_cs
from .search import SearchBounds, bounded_sat, explain_unsat
from .semantics import model_check
from .syntax import Formula, Node, children, desugar
from .validation import Universe, fitting_to_neighborhood, validate

OK, REJECTED, USAGE, BUDGET = 0, 1, 2, 3

# deeply nested formulas (time=m unfolds to depth ~2m) need more stack than the default
_STACK_BYTES = 512 * 1024 * 1024
_RECURSION_LIMIT = 200_000


class _Out:
    """Text or machine output; machine lines are ``KIND<TAB>TARGET<TAB>VERDICT``."""

    def __init__(self, fmt: str, stream: TextIO):
        self.machine = fmt == "machine"
        self.stream = stream

    def text(self, line: str = "") -> None:
        if not self.machine:
            print(line, file=self.stream)

    def row(self, kind: str, target: str, verdict: str) -> None:
        if self.machine:
            clean = [str(x).replace("\t", " ").replace("\n", " ") for x in (kind, target, verdict)]
            print("\t".join(clean), file=self.stream)


def ast_tree(node: Node, indent: int = 0) -> list[str]:
    """An indented outline of a formula tree."""
    pad = "  " * indent
    kids = children(node) if isinstance(node, Formula) else ()
    fields = [
        f"{name}={pretty_field(getattr(node, name))}"
        for name in node.__dataclass_fields__
        if not isinstance(getattr(node, name), Formula)
    ]
    head = f"{pad}{type(node).__name__}" + (f"({', '.join(fields)})" if fields else "")
    out = [head]
    for k in kids:
        out.extend(ast_tree(k, indent + 1))
    return out


def pretty_field(value: object) -> str:
    return str(value) if isinstance(value, Node) else repr(value)


# ---------------------------------------------------------------- commands


def cmd_parse(args, out: _Out) -> int:
    f = parse_formula(args.expression)
    core = desugar(f)
    out.text(f"formula: {pretty(f)}")
    out.text("ast:")
    for line in ast_tree(f, 1):
        out.text(line)
    out.text(f"core: {pretty(core)}")
    out.row("formula", args.expression, pretty(f))
    out.row("core", args.expression, pretty(core))
    return OK


def _dependencies(path: Path, seen: dict[str, Path]) -> None:
    """Scripts cited through ``requires``, found as sibling files, deepest first."""
    script = load_script(path)
    for dep in script.requires:
        candidate = path.parent / f"{dep}.jtopf"
        if dep not in seen and candidate.exists():
            _dependencies(candidate, seen)
    seen.setdefault(script.name, path)


def cmd_check_proof(args, out: _Out) -> int:
    path = Path(args.file)
    order: dict[str, Path] = {}
    _dependencies(path, order)
    registry = Registry()
    report = None
    for p in order.values():
        script = load_script(p)
        cs = load_cs(args.cs) if args.cs else resolve_cs(script, p.parent)
        report = check_proof(script, cs, registry)
        if p == path or not report.accepted:
            out.text(f"{script.name}: {report.verdict} ({len(script.lines)} lines)")
            for d in report.diagnostics:
                out.text(f"  {d}")
            out.row("proof", script.name, report.verdict)
            for d in report.diagnostics:
                out.row("diagnostic", f"{script.name}:{d.line}", f"{d.kind}: {d.detail}")
    return OK if report is not None and report.accepted else REJECTED


def _universe(path: str) -> Universe:
    ff = parse_formula_file(Path(path).read_text(encoding="utf-8"))
    return Universe.closure(ff.all(), label=Path(path).name)


def cmd_validate_model(args, out: _Out) -> int:
    m = load_model(args.file)
    universe = _universe(args.universe)
    report = validate(m, universe)
    verdict = "VALID" if report.ok else "INVALID"
    out.text(f"{m.name or args.file}: {verdict} over {universe.describe()}")
    for v in report.violations:
        out.text(f"  {v}")
    out.row("validate", m.name or args.file, verdict)
    for v in report.violations:
        out.row("violation", v.kind, f"{v.subject} {v.detail}".strip())
    return OK if report.ok else REJECTED


def cmd_model_check(args, out: _Out) -> int:
    m = load_model(args.file)
    f = parse_formula(args.expression, frozenset(m.constants))
    if args.semantics == "neighborhood" and isinstance(m, FittingModel):
        m = fitting_to_neighborhood(m, Universe.closure([f]))
    elif args.semantics == "fitting" and not isinstance(m, FittingModel):
        raise _Usage("a neighborhood model has no Fitting reading; omit --semantics or pass neighborhood")
    if not 0 <= args.run < len(m.runs):
        raise _Usage(f"run {args.run} out of range: the model has {len(m.runs)} runs")
    if args.pos < 0:
        raise _Usage("position must be non-negative")
    value = model_check(m, args.run, args.pos, f)
    out.text(str(value).lower())
    out.row("model-check", f"{m.name or args.file} r{args.run}@{args.pos} |= {pretty(f)}", str(value).lower())
    return OK if value else REJECTED


def cmd_search(args, out: _Out) -> int:
    ff = parse_formula_file(Path(args.file).read_text(encoding="utf-8"))
    bounds = SearchBounds(args.max_stem, args.max_loop)
    verdict = bounded_sat(ff.all(), args.at, bounds)
    out.text(str(verdict))
    out.text(f"guarantee: {verdict.guarantee()}")
    out.row("search", args.file, str(verdict))
    if not verdict.sat and args.explain:
        report = explain_unsat(ff.all(), bounds, args.at)
        out.text(str(report))
        for key, value in report.entries:
            out.row("explain", key, value)
    return OK if verdict.sat else REJECTED


def cmd_corpus(args, out: _Out) -> int:
    from .corpus.cases import export, get_case, load_corpus, run_case

    if args.action == "list":
        for case in load_corpus():
            out.text(f"{case.name}: {case.description} ({len(case.expectations)} expectations)")
            out.row("case", case.name, str(len(case.expectations)))
        return OK
    if args.action == "export":
        if not args.target:
            raise _Usage("corpus export needs a directory")
        written = export(Path(args.target))
        out.text(f"wrote {len(written)} files to {args.target}")
        for path in written:
            out.row("export", str(path), "written")
        return OK
    names = [args.target] if args.target else [c.name for c in load_corpus()]
    for name in names:
        get_case(name)
    ok = True
    for name in names:
        report = run_case(name)
        ok = ok and report.ok
        out.text(report.text())
        if out.machine:
            print(report.machine(), file=out.stream)
        if len(names) > 1:
            out.text()
    return OK if ok else REJECTED


# ---------------------------------------------------------------- argument parsing


class _Usage(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS, help="output style")
    parser = argparse.ArgumentParser(prog="jto", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse a formula and show its tree and core form")
    p.add_argument("-e", "--expression", required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check-proof", parents=[common], help="check a .jtopf proof script")
    p.add_argument("file")
    p.add_argument("--cs", help=".jto file whose formulas form the constant specification")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("validate-model", parents=[common], help="check a model's conditions over a universe")
    p.add_argument("file")
    p.add_argument("--universe", required=True, help=".jto file; its subformula closure is the universe")
    p.set_defaults(func=cmd_validate_model)

    p = sub.add_parser("model-check", parents=[common], help="evaluate a formula at a point of a model")
    p.add_argument("file")
    p.add_argument("-e", "--expression", required=True)
    p.add_argument("--run", type=int, default=0)
    p.add_argument("--pos", type=int, default=0)
    p.add_argument("--semantics", choices=("fitting", "neighborhood"))
    p.set_defaults(func=cmd_model_check)

    p = sub.add_parser("search", parents=[common], help="bounded satisfiability over lasso shapes")
    p.add_argument("-f", "--file", required=True)
    p.add_argument("--at", type=int, default=None, help="satisfy the formulas at this instant")
    p.add_argument("--max-stem", type=int, default=8)
    p.add_argument("--max-loop", type=int, default=2)
    p.add_argument("--explain", action="store_true", help="on UNSAT, name the first clashing atom")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("corpus", parents=[common], help="run, list or export the built-in case study")
    p.add_argument("action", choices=("run", "list", "export"))
    p.add_argument("target", nargs="?", help="case name for run, directory for export")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return USAGE if stop.code else OK
    out = _Out(getattr(args, "format", "text"), stdout)
    result: list[int] = []
    worker = threading.Thread(target=lambda: result.append(_dispatch(args, out, stderr)))
    old_stack, old_limit = threading.stack_size(), sys.getrecursionlimit()
    threading.stack_size(_STACK_BYTES)
    sys.setrecursionlimit(_RECURSION_LIMIT)
    try:
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
        sys.setrecursionlimit(old_limit)
    return result[0]


def _dispatch(args: argparse.Namespace, out: _Out, stderr: TextIO) -> int:
    try:
        return args.func(args, out)
    except _Usage as err:
        print(f"jto {args.command}: {err}", file=stderr)
        return USAGE
    except (BoundsTooLarge, HorizonExceeded, TooManyAtoms) as err:
        print(f"jto {args.command}: budget exceeded: {err}", file=stderr)
        return BUDGET
    except RecursionError:
        print(f"jto {args.command}: budget exceeded: formula nesting too deep", file=stderr)
        return BUDGET
    except PositionDependence as err:
        print(f"jto {args.command}: {err}", file=stderr)
        return REJECTED
    except (JtoError, OSError, ValueError) as err:
        print(f"jto {args.command}: {type(err).__name__}: {err}", file=stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
