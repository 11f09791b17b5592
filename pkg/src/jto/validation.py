"""Frame, evidence and neighborhood conditions over a finite universe, and the Fitting-to-neighborhood transform.

The closure conditions quantify over all terms and formulas.  Here they are
instantiated over a declared :class:`Universe` only; implications are taken
from the universe itself, so an application instance is checked exactly
when ``phi -> psi`` belongs to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable

from .errors import UniverseTooSmall
from .models import (
    EvidenceRule,
    EvidenceTable,
    FittingModel,
    FormulaPattern,
    NeighborhoodModel,
    NeighborhoodRule,
    NeighborhoodTable,
    TermPattern,
)
from .report import ValidationReport
from .semantics import FittingSemantics, NeighborhoodSemantics, semantics_for
from .syntax import (
    Bang,
    Dagger,
    Formula,
    Implies,
    JBox,
    Modal,
    OBox,
    Prod,
    Sort,
    Sum,
    Term,
    Wildcard,
    desugar,
    neg,
    subformulas,
    subterms,
    term_sort,
)


@dataclass(frozen=True)
class Universe:
    """Finite sets of terms and core formulas over which conditions are instantiated."""

    terms: frozenset[Term]
    formulas: frozenset[Formula]
    label: str = ""

    @classmethod
    def closure(cls, fs: Iterable[Formula], extra_terms: Iterable[Term] = (), label: str = "") -> "Universe":
        """Subformula closure of ``fs`` (core forms) with every term and subterm occurring there."""
        formulas: set[Formula] = set()
        for f in fs:
            formulas |= subformulas(desugar(f))
        terms: set[Term] = set()
        for g in formulas:
            if isinstance(g, Modal):
                terms.update(subterms(g.term))
        for t in extra_terms:
            terms.update(subterms(t))
        terms.discard(Wildcard())
        return cls(frozenset(terms), frozenset(formulas), label)

    def epistemic_terms(self) -> list[Term]:
        return list(self._epistemic)

    def deontic_terms(self) -> list[Term]:
        return list(self._deontic)

    def sorted_formulas(self) -> list[Formula]:
        return list(self._sorted)

    def implications(self) -> list[Implies]:
        return list(self._implications)

    @cached_property
    def _epistemic(self) -> tuple[Term, ...]:
        return tuple(sorted((t for t in self.terms if term_sort(t) in (None, Sort.EPISTEMIC)), key=str))

    @cached_property
    def _deontic(self) -> tuple[Term, ...]:
        return tuple(sorted((t for t in self.terms if term_sort(t) in (None, Sort.DEONTIC)), key=str))

    @cached_property
    def _sorted(self) -> tuple[Formula, ...]:
        return tuple(sorted(self.formulas, key=lambda f: (len(str(f)), str(f))))

    @cached_property
    def _implications(self) -> tuple[Implies, ...]:
        return tuple(f for f in self._sorted if isinstance(f, Implies) and f.left in self.formulas)

    def describe(self) -> str:
        name = f"{self.label}: " if self.label else ""
        return f"{name}{len(self.terms)} terms, {len(self.formulas)} formulas"


def _agents(m) -> tuple[str, ...]:
    return m.agents


# ---------------------------------------------------------------- Fitting models


def validate_fitting(m: FittingModel, universe: Universe) -> ValidationReport:
    """Frame conditions exactly; evidence conditions over ``universe``."""
    report = ValidationReport(universe=universe.describe())
    states = m.states
    for agent in _agents(m):
        rel = m.relations.get(agent, frozenset())
        for s in states:
            if (s, s) not in rel:
                report.add("reflexivity", f"R_{agent}", f"{s} does not see itself")
        for (a, b), (c, d) in product(sorted(rel), sorted(rel)):
            if b == c and (a, d) not in rel:
                report.add("transitivity", f"R_{agent}", f"{a}->{b}->{d} without {a}->{d}")
        orel = m.orelations.get(agent, frozenset())
        for a, b in sorted(orel):
            if (b, b) not in orel:
                report.add("shift-reflexivity", f"RO_{agent}", f"{a}->{b} but not {b}->{b}")
    ev, nev = m.evidence, m.nevidence
    fs = universe.sorted_formulas()
    imps = universe.implications()
    eterms, dterms = universe.epistemic_terms(), universe.deontic_terms()
    for agent in _agents(m):
        rel = m.relations.get(agent, frozenset())
        held = {s: {(t, f) for t, f in product(eterms, fs) if ev.contains(agent, s, t, f)} for s in states}
        order = {pair: k for k, pair in enumerate(product(eterms, fs))}
        for v, w in sorted(rel):
            for t, f in sorted(held[v] - held[w], key=order.__getitem__) if v != w else ():
                report.add("monotonicity", f"E_{agent}({w},{t})", f"{f} is in E({v},{t}) and {v} R {w}")
        for w in states:
            for entry in sorted(m.cs.entries, key=str):
                core = desugar(entry)
                table = nev if isinstance(core, OBox) else ev
                kind = "constant-specification-O" if isinstance(core, OBox) else "constant-specification"
                if not table.contains(agent, w, core.term, core.sub):
                    report.add(kind, f"{w}", f"{core.sub} missing for {core.term}")
            for table, terms, kind in ((ev, eterms, "application"), (nev, dterms, "application-O")):
                for f in imps:
                    for t in terms:
                        if not table.contains(agent, w, t, f):
                            continue
                        for s in terms:
                            if table.contains(agent, w, s, f.left) and not table.contains(agent, w, Prod(t, s), f.right):
                                report.add(kind, f"{w}", f"{f.right} missing for {Prod(t, s)}")
            for t, f in product(eterms, fs):
                if not ev.contains(agent, w, t, f):
                    continue
                if not ev.contains(agent, w, Bang(t), JBox(agent, t, f)):
                    report.add("positive-introspection", f"{w}", f"[{t}]_{agent} {f} missing for !{t}")
                for s in eterms:
                    for total in (Sum(t, s), Sum(s, t)):
                        if not ev.contains(agent, w, total, f):
                            report.add("sum", f"{w}", f"{f} missing for {total}")
            for t, f in product(dterms, fs):
                if nev.contains(agent, w, t, f) and nev.contains(agent, w, t, desugar(neg(f))):
                    report.add("consistency", f"EO_{agent}({w},{t})", f"both {f} and its negation")
                of = Implies(OBox(agent, t, f), f)
                if not nev.contains(agent, w, Dagger(t), of):
                    report.add("obligated-factivity", f"EO_{agent}({w},#{t})", f"{of} missing")
    return report


# ---------------------------------------------------------------- neighborhood models


def validate_neighborhood(m: NeighborhoodModel, universe: Universe) -> ValidationReport:
    """The nine closure conditions on the neighborhood functions, instantiated over ``universe``."""
    report = ValidationReport(universe=universe.describe())
    sem: NeighborhoodSemantics = semantics_for(m)
    ts = sem.truth_set
    fs = universe.sorted_formulas()
    imps = universe.implications()
    eterms, dterms = universe.epistemic_terms(), universe.deontic_terms()
    normal = [s for s in m.states if s in m.image]
    built: dict[tuple, Formula] = {}

    def once(key: tuple, make) -> Formula:
        # the same object each time, so truth sets hit the identity cache
        f = built.get(key)
        if f is None:
            f = built[key] = make()
        return f

    for agent, w in product(_agents(m), normal):
        n_fam = {t: m.neighborhoods.family(agent, w, t) for t in eterms}
        o_fam = {t: m.oneighborhoods.family(agent, w, t) for t in dterms}
        for entry in sorted(m.cs.entries, key=str):
            core = desugar(entry)
            table = m.oneighborhoods if isinstance(core, OBox) else m.neighborhoods
            kind = "constant-specification-NO" if isinstance(core, OBox) else "constant-specification-N"
            if ts(core.sub) not in table.family(agent, w, core.term):
                report.add(kind, f"{w}", f"[[{core.sub}]] missing for {core.term}")
        for fam, table, kind in ((n_fam, m.neighborhoods, "application-N"), (o_fam, m.oneighborhoods, "application-NO")):
            for f in imps:
                whole = ts(f)
                for t, family in fam.items():
                    if whole not in family:
                        continue
                    left = ts(f.left)
                    for s, family_s in fam.items():
                        if left in family_s and ts(f.right) not in table.family(agent, w, Prod(t, s)):
                            report.add(kind, f"{w}", f"[[{f.right}]] missing for {Prod(t, s)}")
        for t, family in n_fam.items():
            for f in fs:
                body = ts(f)
                if body not in family:
                    continue
                if w not in body:
                    report.add("reflexivity-N", f"{w}", f"[[{f}]] in N({t}) but {w} is not in it")
                box = ts(once(("box", agent, t, f), lambda: JBox(agent, t, f)))
                if box not in m.neighborhoods.family(agent, w, Bang(t)):
                    report.add("positive-introspection-N", f"{w}", f"[[[{t}]_{agent} {f}]] missing for !{t}")
                for s in eterms:
                    for total in (Sum(t, s), Sum(s, t)):
                        if body not in m.neighborhoods.family(agent, w, total):
                            report.add("sum-N", f"{w}", f"[[{f}]] missing for {total}")
        for t, family in o_fam.items():
            dagger = m.oneighborhoods.family(agent, w, Dagger(t))
            for f in fs:
                if ts(f) in family and ts(once(("neg", f), lambda: desugar(neg(f)))) in family:
                    report.add("noc-NO", f"{w}", f"[[{f}]] and [[~{f}]] both in NO({t})")
                of = once(("of", agent, t, f), lambda: Implies(OBox(agent, t, f), f))
                if ts(of) not in dagger:
                    report.add("obligated-factivity-NO", f"{w}", f"[[{of}]] missing for #{t}")
    return report


def validate(m: FittingModel | NeighborhoodModel, universe: Universe) -> ValidationReport:
    if isinstance(m, FittingModel):
        return validate_fitting(m, universe)
    return validate_neighborhood(m, universe)


# ---------------------------------------------------------------- transform


def fitting_to_neighborhood(m: FittingModel, universe: Universe | Iterable[Formula], witnesses: bool = True) -> NeighborhoodModel:
    """Neighborhood model agreeing with ``m`` on every universe formula.

    Each family collects the truth sets of evidenced assertion bodies whose
    truth holds at every accessible state.  Two different bodies may share a
    truth set while only one of them is evidenced; with ``witnesses`` set,
    one non-normal state per body (valuating exactly that formula) keeps
    their truth sets apart.  ``witnesses=False`` gives the
    construction over the visited states only.
    """
    if not isinstance(universe, Universe):
        universe = Universe.closure(universe)
    formulas = universe.sorted_formulas()
    for f in formulas:
        if isinstance(f, Modal):
            if f.sub not in universe.formulas:
                raise UniverseTooSmall(f"{f} needs {f.sub} in the universe")
            if f.term not in universe.terms:
                raise UniverseTooSmall(f"{f} needs the term {f.term} in the universe")
    sem: FittingSemantics = semantics_for(m)
    image = [s for s in m.states if s in m.image]
    # only bodies of assertions are ever looked up in a family
    bodies = {f.sub for f in formulas if isinstance(f, Modal)}
    formulas = [f for f in formulas if f in bodies]
    taken = set(m.states)
    witness: dict[Formula, str] = {}
    if witnesses:
        for k, f in enumerate(formulas):
            name = f"u{k}"
            while name in taken:
                name = "_" + name
            taken.add(name)
            witness[f] = name
    sets = {}
    for f in formulas:
        base = sem.truth_set(f)
        sets[f] = base | {witness[f]} if witnesses else base
    rules_n, rules_o = [], []
    terms = sorted(universe.terms, key=str)
    for agent in m.agents:
        for w in image:
            for t in terms:
                for deontic, table, rules in ((False, m.evidence, rules_n), (True, m.nevidence, rules_o)):
                    sort = term_sort(t)
                    if sort is (Sort.EPISTEMIC if deontic else Sort.DEONTIC):
                        continue
                    acc = m.accessible(agent, w, deontic)
                    family = frozenset(
                        sets[f] for f in formulas if table.contains(agent, w, t, f) and acc <= sem.truth_set(f)
                    )
                    if family:
                        rules.append(NeighborhoodRule(agent, frozenset([w]), TermPattern("exact", (t,)), family))
    states = tuple(image) + tuple(witness[f] for f in formulas if f in witness)
    nonnormal = {witness[f]: ((f,), ()) for f in formulas if f in witness}
    return NeighborhoodModel(
        states=states,
        runs=m.runs,
        agents=m.agents,
        valuation={s: m.valuation[s] for s in image if s in m.valuation},
        cs=m.cs,
        name=f"{m.name}-neighborhood" if m.name else "",
        constants=m.constants,
        neighborhoods=NeighborhoodTable(tuple(rules_n)),
        oneighborhoods=NeighborhoodTable(tuple(rules_o)),
        nonnormal=nonnormal,
    )


def evidence_rule(agent: str, state: str | None, term: Term | str, formula: Formula | str, member: bool = True) -> EvidenceRule:
    """Convenience constructor used by builders and tests (``None`` or ``"*"`` means any)."""
    from .models import parse_formula_pattern, parse_term_pattern

    states = None if state in (None, "*") else frozenset([state])
    tp = parse_term_pattern(term) if isinstance(term, str) else TermPattern("exact", (term,))
    fp = parse_formula_pattern(formula) if isinstance(formula, str) else FormulaPattern("exact", desugar(formula))
    return EvidenceRule(agent, states, tp, fp, member)


__all__ = [
    "Universe",
    "validate_fitting",
    "validate_neighborhood",
    "validate",
    "fitting_to_neighborhood",
    "evidence_rule",
    "EvidenceTable",
]
