"""Proof scripts, constant specifications and the line-by-line proof checker.

A script line carries the set of hypotheses it depends on.  A line is
licensed when the hypotheses its rule needs are contained in the declared
set, so declaring extra hypotheses is harmless, while necessitation demands
that the premise line declares none at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .axioms import AXIOM_NAMES, chain, match_axiom, taut_check
from .errors import TooManyAtoms
from .report import ValidationReport
from .syntax import (
    AlwaysBoxdot,
    Always,
    Const,
    Formula,
    Implies,
    JBox,
    Next,
    OBox,
    Once,
    Sofar,
    WeakPrev,
    desugar,
)

RULES = (
    "Hyp",
    "Axiom",
    "IaxNec",
    "Taut",
    "MP",
    "NecX",
    "NecYw",
    "NecG",
    "NecH",
    "BoxdotLift",
    "WPrevRM",
    "OnceRM",
    "Weaken",
    "Lemma",
)
_NEC = {"NecX": Next, "NecYw": WeakPrev, "NecG": Always, "NecH": Sofar}
_RM = {"WPrevRM": WeakPrev, "OnceRM": Once}


@dataclass(frozen=True)
class Justification:
    """``rule`` is one of :data:`RULES`; ``name`` is the axiom or the cited script."""

    rule: str
    refs: tuple[int, ...] = ()
    name: str | None = None

    def __str__(self) -> str:
        if self.rule == "Axiom":
            return f"Axiom({self.name})"
        if self.rule == "Lemma":
            refs = "".join(f", {r}" for r in self.refs)
            return f"Lemma({self.name}{refs})"
        if self.refs:
            return f"{self.rule}({', '.join(map(str, self.refs))})"
        return self.rule


@dataclass(frozen=True)
class ProofLine:
    index: int
    hypotheses: frozenset[Formula]
    formula: Formula
    justification: Justification
    comment: str = ""


@dataclass
class ProofScript:
    name: str
    goal_hypotheses: tuple[Formula, ...]
    goal: Formula
    lines: list[ProofLine] = field(default_factory=list)
    cs: str = "empty"
    comment: str = ""
    requires: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class ConstantSpecification:
    entries: frozenset[Formula] = frozenset()

    def __contains__(self, f: Formula) -> bool:
        return desugar(f) in self._core

    @property
    def _core(self) -> frozenset[Formula]:
        cached = self.__dict__.get("_core_cache")
        if cached is None:
            cached = frozenset(desugar(e) for e in self.entries)
            object.__setattr__(self, "_core_cache", cached)
        return cached

    def epistemic(self) -> frozenset[Formula]:
        return frozenset(e for e in self.entries if isinstance(desugar(e), JBox))

    def deontic(self) -> frozenset[Formula]:
        return frozenset(e for e in self.entries if isinstance(desugar(e), OBox))


EMPTY_CS = ConstantSpecification()


def _peel_constants(f: Formula) -> tuple[list[Formula], Formula]:
    prefix = []
    while isinstance(f, (JBox, OBox)) and isinstance(f.term, Const):
        prefix.append(f)
        f = f.sub
    return prefix, f


def check_cs(cs: ConstantSpecification) -> ValidationReport:
    """Shape, inner axiom instance, homogeneous prefix and downward closure of every entry."""
    report = ValidationReport(universe="constant specification")
    core = cs._core
    for entry in sorted(cs.entries, key=str):
        f = desugar(entry)
        prefix, inner = _peel_constants(f)
        if not prefix:
            report.add("shape", entry, "not prefixed by a justification constant")
            continue
        if len({type(box) for box in prefix}) > 1:
            report.add("mixed-prefix", entry, "epistemic and deontic constants mixed in one prefix")
        if not match_axiom(inner):
            report.add("inner-not-axiom", entry, f"{inner} is not an axiom instance")
        if len(prefix) > 1 and prefix[0].sub not in core:
            report.add("downward-closure", entry, f"missing {prefix[0].sub}")
    return report


# ---------------------------------------------------------------- checking


@dataclass(frozen=True)
class Diagnostic:
    line: int
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.kind}: {self.detail}"


@dataclass
class CheckReport:
    script: str
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.diagnostics

    @property
    def verdict(self) -> str:
        return "ACCEPT" if self.accepted else "REJECT"


@dataclass(frozen=True)
class Sequent:
    hypotheses: frozenset[Formula]
    formula: Formula


class Registry:
    """Goals of scripts accepted so far; ``Lemma`` may only cite these."""

    def __init__(self):
        self._goals: dict[str, Sequent] = {}

    def register(self, script: ProofScript) -> None:
        self._goals[script.name] = Sequent(
            frozenset(desugar(h) for h in script.goal_hypotheses), desugar(script.goal)
        )

    def get(self, name: str) -> Sequent | None:
        return self._goals.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._goals

    def copy(self) -> "Registry":
        out = Registry()
        out._goals = dict(self._goals)
        return out


class _Reject(Exception):
    def __init__(self, kind: str, detail: str):
        self.kind = kind
        self.detail = detail


def _core_set(fs: Iterable[Formula]) -> frozenset[Formula]:
    return frozenset(desugar(f) for f in fs)


def _required(line: ProofLine, lines: dict[int, ProofLine], cs: ConstantSpecification, registry: Registry) -> frozenset[Formula]:
    """Check the rule's side conditions; return the hypotheses it needs."""
    j = line.justification
    f = desugar(line.formula)
    declared = _core_set(line.hypotheses)

    def premise(k: int) -> ProofLine:
        if k not in lines or k >= line.index:
            raise _Reject("SideConditionFailed", f"reference {k} is not an earlier line")
        return lines[k]

    def arity(n: int) -> None:
        if len(j.refs) != n:
            raise _Reject("SideConditionFailed", f"{j.rule} takes {n} line reference(s)")

    rule = j.rule
    if rule == "Hyp":
        arity(0)
        if f not in declared:
            raise _Reject("SideConditionFailed", "formula is not among the line's hypotheses")
        return frozenset({f})
    if rule == "Axiom":
        arity(0)
        if j.name not in AXIOM_NAMES:
            raise _Reject("UnknownJustification", f"no axiom schema named {j.name}")
        if j.name == "Taut":
            if not _taut(f):
                raise _Reject("SideConditionFailed", "not a propositional tautology")
        elif j.name not in match_axiom(f):
            raise _Reject("SideConditionFailed", f"not an instance of {j.name}")
        return frozenset()
    if rule == "IaxNec":
        arity(0)
        if f not in cs:
            raise _Reject("SideConditionFailed", "formula is not in the constant specification")
        return frozenset()
    if rule == "Taut":
        premises = [premise(k) for k in j.refs]
        if not _taut(chain([desugar(p.formula) for p in premises], f)):
            raise _Reject("SideConditionFailed", "not a propositional consequence of the cited lines")
        return frozenset().union(*(_core_set(p.hypotheses) for p in premises))
    if rule == "MP":
        arity(2)
        minor, major = premise(j.refs[0]), premise(j.refs[1])
        if desugar(major.formula) != Implies(desugar(minor.formula), f):
            raise _Reject("SideConditionFailed", f"line {j.refs[1]} is not line {j.refs[0]} -> this formula")
        return _core_set(minor.hypotheses) | _core_set(major.hypotheses)
    if rule in _NEC or rule in _RM:
        arity(1)
        p = premise(j.refs[0])
        if p.hypotheses:
            raise _Reject("HypothesisLeak", f"{rule} applied to line {j.refs[0]}, which has hypotheses")
        body = desugar(p.formula)
        if rule in _NEC:
            expected = desugar(_NEC[rule](body))
        else:
            if not isinstance(body, Implies):
                raise _Reject("SideConditionFailed", f"line {j.refs[0]} is not an implication")
            op = _RM[rule]
            expected = desugar(Implies(op(body.left), op(body.right)))
        if f != expected:
            raise _Reject("SideConditionFailed", f"expected {expected}")
        return frozenset()
    if rule == "BoxdotLift":
        arity(1)
        p = premise(j.refs[0])
        if f != desugar(AlwaysBoxdot(p.formula)):
            raise _Reject("SideConditionFailed", f"expected A applied to line {j.refs[0]}")
        return frozenset(desugar(AlwaysBoxdot(h)) for h in p.hypotheses)
    if rule == "Weaken":
        arity(1)
        p = premise(j.refs[0])
        if f != desugar(p.formula):
            raise _Reject("SideConditionFailed", f"formula differs from line {j.refs[0]}")
        return _core_set(p.hypotheses)
    if rule == "Lemma":
        cited = registry.get(j.name or "")
        if cited is None:
            raise _Reject("SideConditionFailed", f"no previously accepted script named {j.name}")
        if f != cited.formula:
            raise _Reject("SideConditionFailed", f"formula differs from the goal of {j.name}")
        premises = [premise(k) for k in j.refs]
        discharged = _core_set(p.formula for p in premises)
        if not discharged <= cited.hypotheses:
            raise _Reject("SideConditionFailed", f"a cited line is not a hypothesis of {j.name}")
        rest = cited.hypotheses - discharged
        return rest.union(*(_core_set(p.hypotheses) for p in premises))
    raise _Reject("UnknownJustification", f"unknown rule {rule}")


def _taut(f: Formula) -> bool:
    try:
        return taut_check(f)
    except TooManyAtoms as err:
        raise _Reject("SideConditionFailed", str(err)) from None


def check_proof(script: ProofScript, cs: ConstantSpecification = EMPTY_CS, registry: Registry | None = None) -> CheckReport:
    """Check every line of ``script``; on acceptance the goal is added to ``registry``."""
    report = CheckReport(script.name)
    registry = Registry() if registry is None else registry
    lines: dict[int, ProofLine] = {}
    for line in script.lines:
        if line.index in lines:
            report.diagnostics.append(Diagnostic(line.index, "SideConditionFailed", "duplicate line number"))
            continue
        lines[line.index] = line
        try:
            needed = _required(line, lines, cs, registry)
        except _Reject as err:
            report.diagnostics.append(Diagnostic(line.index, err.kind, err.detail))
            continue
        missing = needed - _core_set(line.hypotheses)
        if missing:
            report.diagnostics.append(
                Diagnostic(line.index, "SideConditionFailed", f"undeclared hypothesis {next(iter(missing))}")
            )
    if not script.lines:
        report.diagnostics.append(Diagnostic(0, "GoalMismatch", "empty script"))
    else:
        last = script.lines[-1]
        if desugar(last.formula) != desugar(script.goal):
            report.diagnostics.append(Diagnostic(last.index, "GoalMismatch", "last line is not the goal formula"))
        elif not _core_set(last.hypotheses) <= _core_set(script.goal_hypotheses):
            report.diagnostics.append(Diagnostic(last.index, "GoalMismatch", "last line uses hypotheses outside the goal"))
    if report.accepted:
        registry.register(script)
    return report


def check_bundle(scripts: Iterable[ProofScript], cs: ConstantSpecification = EMPTY_CS, registry: Registry | None = None) -> list[CheckReport]:
    """Check scripts in order against one shared registry."""
    registry = Registry() if registry is None else registry
    return [check_proof(s, cs, registry) for s in scripts]
