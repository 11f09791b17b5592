"""The six built-in cases, their expectations and the runner.

Cases read the shipped assets (``.jto``, ``.jtopf`` and ``.jtom`` files under
``assets/``), so running a case checks exactly what is distributed.  The
builders in :mod:`jto.corpus.scripts` and :mod:`jto.corpus.models` produce
those assets, and :func:`write_assets` regenerates them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable

from ..errors import UnknownCase
from ..kernel import Registry, check_bundle
from ..models import FittingModel, NeighborhoodModel, dumps_model, loads_model
from ..parser import FormulaFile, format_formula_file
from ..scriptio import dumps_script, loads_script
from ..search import SearchBounds, bounded_sat
from ..semantics import model_check
from ..syntax import Formula, conj
from ..validation import Universe, validate
from . import models as builders
from .formulas import F, FORMULA_FILES, asset_text

# model name -> named formulas whose subformula closure is its validation universe
UNIVERSES: dict[str, tuple[str, ...]] = {
    "i1": ("contract", "court", "at10", "protagoras_goal", "euathlus_goal"),
    "i1-fitting": ("contract", "court", "at10", "protagoras_goal", "euathlus_goal"),
    "i2": ("contract2", "winfirst_ever"),
    "i3": ("contract2", "court2", "at10", "protagoras2_goal", "euathlus2_goal"),
    "i3-fitting": ("contract2", "court2", "at10", "protagoras2_goal", "euathlus2_goal"),
    "i4": ("contract2", "court2", "at10", "nopay10"),
    "jre": ("jre", "jre_context"),
    "jre-o": ("jre_o", "jre_context"),
    "consistency": ("consistency",),
    "strong-no-conflicts": ("conflict", "weak_no_conflicts"),
}


# ---------------------------------------------------------------- assets


@lru_cache(maxsize=None)
def model(name: str) -> FittingModel | NeighborhoodModel:
    return loads_model(asset_text(f"models/{name}.jtom"))


@lru_cache(maxsize=None)
def universe(name: str) -> Universe:
    return Universe.closure([F(n) for n in UNIVERSES[name]], label=f"{name} universe")


@lru_cache(maxsize=None)
def _script(name: str):
    return loads_script(asset_text(f"scripts/{name}.jtopf"))


def script_closure(name: str) -> list:
    """The shipped script ``name`` preceded by everything it cites, in checking order."""
    seen: dict = {}

    def visit(n: str) -> None:
        if n in seen:
            return
        s = _script(n)
        for dep in s.requires:
            visit(dep)
        seen[n] = s

    visit(name)
    return list(seen.values())


def universe_file(name: str) -> str:
    ff = FormulaFile([(n, F(n)) for n in UNIVERSES[name]], list(builders.build(name).agents), [])
    return f"# validation universe of {name}: the subformula closure of these formulas\n" + format_formula_file(ff)


def asset_files() -> dict[str, str]:
    """Relative path -> text of every corpus asset, generated from the builders."""
    from .scripts import case_scripts

    out: dict[str, str] = {}
    for name in FORMULA_FILES:
        out[name] = asset_text(name)
    for name, s in case_scripts().items():
        out[f"scripts/{name}.jtopf"] = dumps_script(s)
    for name in builders.BUILDERS:
        out[f"models/{name}.jtom"] = dumps_model(builders.build(name))
        out[f"universes/{name}.jto"] = universe_file(name)
    return out


def write_assets(root: Path) -> list[Path]:
    """Write every asset under ``root``; used to regenerate the shipped files and by ``corpus export``."""
    written = []
    for rel, text in asset_files().items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


def export(root: Path) -> list[Path]:
    """Copy the shipped assets (not the builders' output) to ``root``."""
    from importlib import resources

    base = resources.files("jto.corpus").joinpath("assets")
    written = []
    for folder in ("", "scripts", "models", "universes"):
        node = base.joinpath(folder) if folder else base
        for item in sorted(node.iterdir(), key=lambda x: x.name):
            if item.is_file() and item.name.endswith((".jto", ".jtopf", ".jtom")):
                path = root / folder / item.name
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(item.read_text(encoding="utf-8"), encoding="utf-8")
                written.append(path)
    return written


# ---------------------------------------------------------------- expectations


@dataclass
class Expectation:
    kind: str  # proof | validate | model-check | search
    target: str
    expected: str
    engine: str
    check: Callable[[], tuple[str, str]] = field(repr=False)


@dataclass
class ExpectationResult:
    kind: str
    target: str
    engine: str
    expected: str
    actual: str
    detail: str
    seconds: float

    @property
    def passed(self) -> bool:
        return self.actual == self.expected

    def machine(self) -> str:
        return f"{self.kind}\t{self.target}\t{self.actual}"

    def text(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        out = f"[{mark}] {self.kind} {self.target}: {self.actual} (expected {self.expected}; {self.engine})"
        return out + (f"\n         {self.detail}" if self.detail and not self.passed else "")


@dataclass
class CorpusCase:
    name: str
    description: str
    agents: tuple[str, ...]
    assumptions: dict[str, Formula]
    scripts: tuple[str, ...]
    models: tuple[str, ...]
    expectations: list[Expectation]
    notes: tuple[str, ...] = ()


@dataclass
class CaseReport:
    case: str
    results: list[ExpectationResult]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def ok(self) -> bool:
        return self.passed == len(self.results)

    def summary(self) -> str:
        return f"{self.passed}/{len(self.results)} expectations pass"

    def text(self) -> str:
        lines = [f"case {self.case}"] + [r.text() for r in self.results]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines + [self.summary()])

    def machine(self) -> str:
        lines = [r.machine() for r in self.results]
        return "\n".join(lines + [f"summary\t{self.case}\t{self.passed}/{len(self.results)}"])


def _proof(name: str) -> Expectation:
    def check() -> tuple[str, str]:
        reports = check_bundle(script_closure(name), registry=Registry())
        bad = [r for r in reports if not r.accepted]
        detail = "; ".join(f"{r.script}: {r.diagnostics[0]}" for r in bad[:3])
        return reports[-1].verdict, detail

    return Expectation("proof", name, "ACCEPT", "check_proof", check)


def _validate(name: str) -> Expectation:
    def check() -> tuple[str, str]:
        report = validate(model(name), universe(name))
        detail = "; ".join(str(v) for v in report.violations[:3])
        return ("VALID" if report.ok else "INVALID"), detail

    kind = "validate_fitting" if builders.BUILDERS[name]()["kind"] == "fitting" else "validate_neighborhood"
    return Expectation("validate", name, "VALID", kind, check)


def _holds(name: str, position: int, names: tuple[str, ...], expected: bool) -> Expectation:
    def check() -> tuple[str, str]:
        value = model_check(model(name), 0, position, conj(*(F(n) for n in names)))
        return str(value).lower(), ""

    kind = "mc_fitting" if builders.BUILDERS[name]()["kind"] == "fitting" else "mc_neighborhood"
    target = f"{name} r0@{position} |= {' & '.join(names)}"
    return Expectation("model-check", target, str(expected).lower(), kind, check)


def _search(names: tuple[str, ...], at: int, expected: str, bounds: SearchBounds = SearchBounds(12, 2)) -> Expectation:
    def check() -> tuple[str, str]:
        verdict = bounded_sat([F(n) for n in names], at, bounds)
        return ("SAT" if verdict.sat else "UNSAT"), str(verdict)

    target = f"{', '.join(names)} @{at} stem<={bounds.max_stem} loop<={bounds.max_loop}"
    return Expectation("search", target, expected, "bounded_sat", check)


def _assumptions(*names: str) -> dict[str, Formula]:
    return {n: F(n) for n in names}


@lru_cache(maxsize=None)
def _cases() -> tuple[CorpusCase, ...]:
    agents = ("p", "e", "j")
    gamma = ("contract", "court", "at10")
    delta = ("contract2", "court2", "at10")
    return (
        CorpusCase(
            "arguments-v1",
            "the two arguments from contract and court, and a model where both assumptions hold at instant 10",
            agents,
            _assumptions("contract", "court"),
            ("protagoras", "euathlus"),
            ("i1", "i1-fitting"),
            [
                _proof("protagoras"),
                _proof("euathlus"),
                _validate("i1"),
                _holds("i1", 10, gamma, True),
                _validate("i1-fitting"),
                _holds("i1-fitting", 10, gamma, True),
            ],
        ),
        CorpusCase(
            "sdl-projection",
            "without justification terms the same assumptions are contradictory at instant 10",
            agents,
            _assumptions("contract_sdl", "court_sdl", "contract2_sdl", "court2_sdl"),
            ("sdl-contradiction", "sdl2-contradiction"),
            (),
            [
                _proof("sdl-contradiction"),
                _search(("contract_sdl", "court_sdl"), 10, "UNSAT"),
                _search(("contract", "court"), 10, "SAT"),
                _proof("sdl2-contradiction"),
                _search(("contract2_sdl", "court2_sdl", "nopay10"), 10, "UNSAT"),
                _search(("contract2", "court2", "nopay10"), 10, "SAT"),
            ],
        ),
        CorpusCase(
            "refined-v2",
            "the refined contract and court: the arguments, a model where Euathlus never wins, and two models of the assumptions",
            agents,
            _assumptions("contract2", "court2"),
            ("protagoras2", "euathlus2"),
            ("i2", "i3", "i3-fitting", "i4"),
            [
                _proof("protagoras2"),
                _proof("euathlus2"),
                _validate("i2"),
                _holds("i2", 0, ("contract2",), True),
                _holds("i2", 0, ("winfirst_ever",), False),
                _validate("i3"),
                _holds("i3", 10, delta, True),
                _validate("i3-fitting"),
                _holds("i3-fitting", 10, delta, True),
                _validate("i4"),
                _holds("i4", 10, delta + ("nopay10",), True),
            ],
            notes=(
                "common knowledge of contract2 is given by its first two levels contract3_1 .. contract3_4; "
                "informative only, not checked",
            ),
        ),
        CorpusCase(
            "permission-to-sue",
            "when Protagoras may sue: not before Euathlus wins a case, and at instant 15 if nothing was paid",
            agents,
            _assumptions("psue", "nowinfirst", "nopay15", "winfirst10"),
            ("no-obligation", "no-permission-core", "no-permission", "permitted-to-sue"),
            (),
            [
                _proof("no-obligation"),
                _proof("no-permission-core"),
                _proof("no-permission"),
                _proof("permitted-to-sue"),
            ],
        ),
        CorpusCase(
            "judge",
            "the judge's verdicts in the first and second case",
            agents,
            _assumptions("pastlooking", "nowinfirst2", "winsecond"),
            ("judge1-core", "judge1", "permitted-to-sue", "judge2"),
            (),
            [
                _proof("judge1-core"),
                _proof("judge1"),
                _proof("permitted-to-sue"),
                _proof("judge2"),
            ],
        ),
        CorpusCase(
            "non-validity",
            "countermodels to justified replacement of equivalents, to consistency of obligations and to strong no conflicts",
            ("1",),
            _assumptions("jre_context", "jre", "jre_o", "consistency", "conflict"),
            (),
            ("jre", "jre-o", "consistency", "strong-no-conflicts"),
            [
                _validate("jre"),
                _holds("jre", 0, ("jre_context",), True),
                _holds("jre", 0, ("jre",), False),
                _validate("jre-o"),
                _holds("jre-o", 0, ("jre_o",), False),
                _validate("consistency"),
                _holds("consistency", 0, ("consistency",), False),
                _validate("strong-no-conflicts"),
                _holds("strong-no-conflicts", 0, ("conflict",), True),
            ],
        ),
    )


def load_corpus() -> list[CorpusCase]:
    return list(_cases())


def case_names() -> list[str]:
    return [c.name for c in _cases()]


def get_case(name: str) -> CorpusCase:
    for c in _cases():
        if c.name == name:
            return c
    raise UnknownCase(f"no corpus case named {name!r}; known: {', '.join(case_names())}")


def run_case(name: str) -> CaseReport:
    case = get_case(name)
    results = []
    for e in case.expectations:
        start = time.perf_counter()
        actual, detail = e.check()
        results.append(ExpectationResult(e.kind, e.target, e.engine, e.expected, actual, detail, time.perf_counter() - start))
    return CaseReport(case.name, results, case.notes)
