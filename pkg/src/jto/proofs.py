"""Building checkable scripts: a line builder, derived rules and the bundled lemmas.

Nothing here is trusted.  Every helper only appends primitive lines that
:func:`jto.kernel.check_proof` re-checks, so a mistake in a helper shows up
as a rejected script rather than as an unsound result.
"""

from __future__ import annotations

from typing import Callable

from .axioms import instantiate
from .errors import OutOfRange
from .kernel import Justification, ProofLine, ProofScript
from .syntax import (
    TOP,
    Always,
    AlwaysBoxdot,
    And,
    Atom,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Once,
    Or,
    Sofar,
    StrongPrev,
    Time,
    Until,
    WeakPrev,
    WeakUntil,
    desugar,
    true_at,
)


class ScriptBuilder:
    """Append-only construction of a :class:`ProofScript`.

    Theorem lines (no hypotheses) are shared: asking twice for the same
    formula returns the first line, which keeps bundled derivations short.
    """

    def __init__(self, name: str, hypotheses: tuple[Formula, ...] = (), comment: str = ""):
        self.name = name
        self.hypotheses = tuple(hypotheses)
        self.comment = comment
        self.lines: list[ProofLine] = []
        self._known: dict[tuple[Formula, frozenset], int] = {}
        self.requires: list[str] = []
        self._last = 0

    # primitive lines

    def add(self, formula: Formula, rule: str, refs: tuple[int, ...] = (), name: str | None = None,
            hyps: frozenset[Formula] = frozenset(), comment: str = "") -> int:
        key = (desugar(formula), frozenset(desugar(h) for h in hyps))
        found = self._known.get(key)
        if found is not None and not comment:
            self._last = found
            return found
        index = len(self.lines) + 1
        self._last = index
        self.lines.append(ProofLine(index, frozenset(hyps), formula, Justification(rule, tuple(refs), name), comment))
        self._known.setdefault(key, index)
        return index

    def formula(self, i: int) -> Formula:
        return self.lines[i - 1].formula

    def hyps(self, i: int) -> frozenset[Formula]:
        return self.lines[i - 1].hypotheses

    def _union(self, refs) -> frozenset[Formula]:
        return frozenset().union(*(self.hyps(r) for r in refs))

    def hyp(self, f: Formula, comment: str = "") -> int:
        return self.add(f, "Hyp", hyps=frozenset({f}), comment=comment)

    def axiom(self, name: str, variant: int = 0, **binding) -> int:
        return self.add(instantiate(name, variant, **binding), "Axiom", name=name)

    def taut(self, f: Formula, *refs: int, comment: str = "") -> int:
        return self.add(f, "Taut", tuple(refs), hyps=self._union(refs), comment=comment)

    def mp(self, minor: int, major: int, comment: str = "") -> int:
        imp = self.formula(major)
        if not isinstance(imp, Implies):
            imp = _as_implication(imp)
        return self.add(imp.right, "MP", (minor, major), hyps=self._union((minor, major)), comment=comment)

    def nec(self, rule: str, i: int) -> int:
        op = {"NecX": Next, "NecYw": WeakPrev, "NecG": Always, "NecH": Sofar}[rule]
        return self.add(op(self.formula(i)), rule, (i,))

    def lift(self, i: int, comment: str = "") -> int:
        hyps = frozenset(AlwaysBoxdot(h) for h in self.hyps(i))
        return self.add(AlwaysBoxdot(self.formula(i)), "BoxdotLift", (i,), hyps=hyps, comment=comment)

    def once_rm(self, i: int) -> int:
        imp = self.formula(i)
        return self.add(Implies(Once(imp.left), Once(imp.right)), "OnceRM", (i,))

    def weaken(self, i: int, hyps: frozenset[Formula]) -> int:
        return self.add(self.formula(i), "Weaken", (i,), hyps=frozenset(hyps) | self.hyps(i))

    def lemma(self, script: ProofScript, *refs: int, comment: str = "") -> int:
        """Cite an accepted script; cited lines discharge matching hypotheses of its goal."""
        discharged = {desugar(self.formula(r)) for r in refs}
        rest = frozenset(h for h in script.goal_hypotheses if desugar(h) not in discharged)
        if script.name not in self.requires:
            self.requires.append(script.name)
        return self.add(script.goal, "Lemma", tuple(refs), name=script.name, hyps=rest | self._union(refs), comment=comment)

    def include(self, script: ProofScript) -> int:
        """Copy the lines of another script (renumbered); returns the index of its last line."""
        offset: dict[int, int] = {}
        for line in script.lines:
            j = line.justification
            refs = tuple(offset[r] for r in j.refs)
            offset[line.index] = self.add(line.formula, j.rule, refs, j.name, line.hypotheses, line.comment)
        for name in script.requires:
            if name not in self.requires:
                self.requires.append(name)
        return offset[script.lines[-1].index]

    def build(self, goal_hypotheses: tuple[Formula, ...] | None = None) -> ProofScript:
        if self._last != len(self.lines):
            # the goal was found among earlier lines; restate it last
            line = self.lines[self._last - 1]
            self.lines.append(ProofLine(len(self.lines) + 1, line.hypotheses, line.formula,
                                        Justification("Weaken", (line.index,))))
        last = self.lines[-1]
        hyps = self.hypotheses if goal_hypotheses is None else tuple(goal_hypotheses)
        if not hyps:
            hyps = tuple(sorted(last.hypotheses, key=str))
        return ProofScript(self.name, hyps, last.formula, list(self.lines), comment=self.comment,
                           requires=tuple(self.requires))


def _as_implication(f: Formula) -> Implies:
    core = desugar(f)
    if not isinstance(core, Implies):
        raise ValueError(f"{f} is not an implication")
    return core


def imp(*fs: Formula) -> Formula:
    """Right-nested implication ``f1 -> (f2 -> ... -> fn)``."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Implies(f, out)
    return out


# ---------------------------------------------------------------- derived rules (theorem level)

_NEC_K = {Next: ("NecX", "NextK"), Always: ("NecG", "AlwaysK"), Sofar: ("NecH", "SofarK"), WeakPrev: ("NecYw", "WPrevK")}


def mono(b: ScriptBuilder, op, i: int) -> int:
    """From theorem ``A -> B`` derive ``op A -> op B`` for op in X, Yw, Ys, G, H, P-, A."""
    a_to_b = b.formula(i)
    if not isinstance(a_to_b, Implies):
        a_to_b = _as_implication(a_to_b)
    a, c = a_to_b.left, a_to_b.right
    if op in _NEC_K:
        nec_rule, k = _NEC_K[op]
        n = b.nec(nec_rule, i)
        ax = b.axiom(k, phi=a, psi=c)
        return b.mp(n, ax)
    if op is StrongPrev:
        contra = b.taut(Implies(Not(c), Not(a)), i)
        w = mono(b, WeakPrev, contra)
        return b.taut(Implies(StrongPrev(a), StrongPrev(c)), w)
    if op is Once:
        return b.once_rm(i)
    if op is AlwaysBoxdot:
        h = mono(b, Sofar, i)
        g = mono(b, Always, i)
        return b.taut(Implies(AlwaysBoxdot(a), AlwaysBoxdot(c)), h, g)
    raise ValueError(f"no monotonicity rule for {op}")


def op_conj(b: ScriptBuilder, op, a: Formula, c: Formula) -> int:
    """``op A & op B -> op (A & B)`` for op in X, Yw."""
    t = b.taut(imp(a, c, And(a, c)))
    first = mono(b, op, t)
    _, k = _NEC_K[op]
    second = b.axiom(k, phi=c, psi=And(a, c))
    return b.taut(Implies(And(op(a), op(c)), op(And(a, c))), first, second)


def always_unfold(b: ScriptBuilder, phi: Formula) -> int:
    """``G phi <-> phi & X G phi``."""
    u2 = b.axiom("Until2", phi=TOP, psi=Not(phi))
    fun = b.axiom("Fun", phi=Until(TOP, Not(phi)))
    return b.taut(Iff(Always(phi), And(phi, Next(Always(phi)))), u2, fun)


def sofar_unfold(b: ScriptBuilder, phi: Formula) -> int:
    """``H phi <-> phi & Yw H phi``."""
    s2 = b.axiom("Since2", phi=TOP, psi=Not(phi))
    return b.taut(Iff(Sofar(phi), And(phi, WeakPrev(Sofar(phi)))), s2)


def lemma2_1(b, phi):
    return b.taut(Implies(Always(phi), And(phi, Next(Always(phi)))), always_unfold(b, phi))


def lemma2_2(b, phi):
    u = always_unfold(b, phi)
    step = b.taut(Implies(Always(phi), phi), u)
    x = mono(b, Next, step)
    return b.taut(Implies(Always(phi), Next(phi)), u, x)


def lemma2_3(b, phi):
    return b.taut(Implies(Sofar(phi), And(phi, WeakPrev(Sofar(phi)))), sofar_unfold(b, phi))


def lemma2_4(b, phi):
    s = sofar_unfold(b, phi)
    step = b.taut(Implies(Sofar(phi), phi), s)
    w = mono(b, WeakPrev, step)
    return b.taut(Implies(Sofar(phi), WeakPrev(phi)), s, w)


def lemma2_5(b, phi):
    return b.taut(Implies(AlwaysBoxdot(phi), phi), sofar_unfold(b, phi))


def boxdot_step_future(b, phi):
    """``A phi -> X A phi``."""
    u = always_unfold(b, phi)
    to_next = lemma2_2(b, phi)
    s = sofar_unfold(b, phi)
    fp = b.axiom("FP", phi=Sofar(phi))
    sw = b.axiom("SW", phi=Sofar(phi))
    m1 = mono(b, Next, sw)
    c1 = op_conj(b, Next, phi, WeakPrev(Sofar(phi)))
    back = b.taut(Implies(And(phi, WeakPrev(Sofar(phi))), Sofar(phi)), s)
    m2 = mono(b, Next, back)
    c2 = op_conj(b, Next, Sofar(phi), Always(phi))
    return b.taut(Implies(AlwaysBoxdot(phi), Next(AlwaysBoxdot(phi))), u, to_next, fp, m1, c1, m2, c2)


def boxdot_step_past(b, phi):
    """``A phi -> Yw A phi``."""
    u = always_unfold(b, phi)
    s = sofar_unfold(b, phi)
    to_prev = lemma2_4(b, phi)
    pf = b.axiom("PF", phi=Always(phi))
    back = b.taut(Implies(And(phi, Next(Always(phi))), Always(phi)), u)
    m = mono(b, WeakPrev, back)
    c1 = op_conj(b, WeakPrev, phi, Next(Always(phi)))
    c2 = op_conj(b, WeakPrev, Sofar(phi), Always(phi))
    return b.taut(Implies(AlwaysBoxdot(phi), WeakPrev(AlwaysBoxdot(phi))), s, to_prev, pf, m, c1, c2)


def boxdot_four(b, phi):
    """``A phi -> A A phi``."""
    bphi = AlwaysBoxdot(phi)
    fut = boxdot_step_future(b, phi)
    g = b.mp(b.nec("NecG", fut), b.axiom("Ind", phi=bphi))
    past = boxdot_step_past(b, phi)
    h = b.mp(b.nec("NecH", past), b.axiom("SofarInd", phi=bphi))
    return b.taut(Implies(bphi, AlwaysBoxdot(bphi)), g, h)


def lemma2_6(b, phi):
    four = boxdot_four(b, phi)
    back = lemma2_5(b, AlwaysBoxdot(phi))
    return b.taut(Iff(AlwaysBoxdot(phi), AlwaysBoxdot(AlwaysBoxdot(phi))), four, back)


def lemma2_7(b, phi, psi):
    w = WeakUntil(phi, psi)
    until = Until(phi, psi)
    u2 = b.axiom("Until2", phi=phi, psi=psi)
    au = always_unfold(b, phi)
    m1 = mono(b, Next, b.taut(Implies(until, w)))
    m2 = mono(b, Next, b.taut(Implies(Always(phi), w)))
    nk = b.axiom("NextK", phi=Not(until), psi=Always(phi))
    fun = b.axiom("Fun", phi=until)
    return b.taut(Iff(w, Or(psi, And(phi, Next(w)))), u2, au, m1, m2, nk, fun)


LEMMA2: dict[int, Callable] = {1: lemma2_1, 2: lemma2_2, 3: lemma2_3, 4: lemma2_4, 5: lemma2_5, 6: lemma2_6, 7: lemma2_7}


def derive_lemma2(item: int, phi: Formula = Atom("p"), psi: Formula = Atom("q")) -> ProofScript:
    """A self-contained theorem script for one of the seven basic temporal facts."""
    if item not in LEMMA2:
        raise OutOfRange(f"lemma item {item} is not in 1..7")
    b = ScriptBuilder(f"lemma2-{item}")
    if item == 7:
        lemma2_7(b, phi, psi)
    else:
        LEMMA2[item](b, phi)
    return b.build()


# ---------------------------------------------------------------- boxdot and temporal micro-lemmas


def boxdot_k(b, a, c):
    """``A(a -> c) -> (A a -> A c)``."""
    h = b.axiom("SofarK", phi=a, psi=c)
    g = b.axiom("AlwaysK", phi=a, psi=c)
    return b.taut(imp(AlwaysBoxdot(Implies(a, c)), AlwaysBoxdot(a), AlwaysBoxdot(c)), h, g)


def boxdot_nec(b, i):
    return b.lift(i)


def boxdot_mono(b, i):
    """From theorem ``a -> c`` derive ``A a -> A c`` via one lift and the K instance."""
    f = b.formula(i)
    lifted = b.lift(i)
    k = boxdot_k(b, f.left, f.right)
    return b.mp(lifted, k)


def boxdot_to_next(b, x):
    return b.taut(Implies(AlwaysBoxdot(x), Next(x)), lemma2_2(b, x))


def boxdot_to_wprev(b, x):
    return b.taut(Implies(AlwaysBoxdot(x), WeakPrev(x)), lemma2_4(b, x))


def boxdot_intro(b, i):
    """From theorem ``A a -> c`` derive ``A a -> A c``."""
    f = b.formula(i)
    a = f.left.sub
    four = boxdot_four(b, a)
    m = boxdot_mono(b, i)
    return b.taut(Implies(f.left, AlwaysBoxdot(f.right)), four, m)


def ys_next_elim(b, phi):
    """``Ys X phi -> phi``."""
    pf = b.axiom("PF", phi=Not(phi))
    fun = b.axiom("Fun", phi=phi)
    step = b.taut(Implies(Next(Not(phi)), Not(Next(phi))), fun)
    w = mono(b, WeakPrev, step)
    return b.taut(Implies(StrongPrev(Next(phi)), phi), pf, w)


def next_ys_elim(b, phi):
    """``X Ys phi -> phi``."""
    fp = b.axiom("FP", phi=Not(phi))
    sw = b.axiom("SW", phi=Not(phi))
    step = b.taut(Implies(StrongPrev(Not(phi)), Not(StrongPrev(phi))), sw)
    x = mono(b, Next, step)
    fun = b.axiom("Fun", phi=StrongPrev(phi))
    return b.taut(Implies(Next(StrongPrev(phi)), phi), fp, x, fun)


def next_wprev_elim(b, phi):
    """``X Yw phi -> phi``."""
    fp = b.axiom("FP", phi=Not(phi))
    dn = mono(b, WeakPrev, b.taut(Implies(phi, Not(Not(phi)))))
    step = b.taut(Implies(StrongPrev(Not(phi)), Not(WeakPrev(phi))), dn)
    x = mono(b, Next, step)
    fun = b.axiom("Fun", phi=WeakPrev(phi))
    return b.taut(Implies(Next(WeakPrev(phi)), phi), fp, x, fun)


def strong_weak_mp(b, a, c):
    """``Ys a & Yw(a -> c) -> Ys c``."""
    contra = b.taut(imp(Implies(a, c), Not(c), Not(a)))
    w = mono(b, WeakPrev, contra)
    k = b.axiom("WPrevK", phi=Not(c), psi=Not(a))
    return b.taut(Implies(And(StrongPrev(a), WeakPrev(Implies(a, c))), StrongPrev(c)), w, k)


# ---------------------------------------------------------------- temporal truth predicate


def ttp1(b, m, phi):
    """``true_m(phi) & time=m -> phi``."""
    x = lemma2_5(b, Implies(Time(m), phi))
    return b.taut(Implies(And(true_at(m, phi), Time(m)), phi), x)


def ttp_rule(b, m, i):
    """From theorem ``phi -> psi`` derive ``true_m(phi) -> true_m(psi)``."""
    f = b.formula(i)
    t = Time(m)
    step = b.taut(Implies(Implies(t, f.left), Implies(t, f.right)), i)
    return boxdot_mono(b, step)


def ttp2(b, m, phi):
    t, t1 = Time(m), Time(m + 1)
    left, right = true_at(m, Next(phi)), true_at(m + 1, phi)
    a = boxdot_to_wprev(b, Implies(t, Next(phi)))
    c = strong_weak_mp(b, t, Next(phi))
    d = ys_next_elim(b, phi)
    fwd = boxdot_intro(b, b.taut(Implies(left, Implies(t1, phi)), a, c, d))
    a2 = boxdot_to_next(b, Implies(t1, phi))
    fp = b.axiom("FP", phi=t)
    k = b.axiom("NextK", phi=StrongPrev(t), psi=phi)
    bwd = boxdot_intro(b, b.taut(Implies(right, Implies(t, Next(phi))), a2, fp, k))
    return b.taut(Iff(left, right), fwd, bwd)


def ttp3_backward(b, m, phi):
    """``true_m(phi) -> true_{m+1}(Ys phi)``."""
    t = Time(m)
    a = boxdot_to_wprev(b, Implies(t, phi))
    c = strong_weak_mp(b, t, phi)
    return boxdot_intro(b, b.taut(Implies(true_at(m, phi), Implies(Time(m + 1), StrongPrev(phi))), a, c))


def ttp3(b, m, phi):
    t, t1 = Time(m), Time(m + 1)
    left, right = true_at(m + 1, StrongPrev(phi)), true_at(m, phi)
    a = boxdot_to_next(b, Implies(t1, StrongPrev(phi)))
    fp = b.axiom("FP", phi=t)
    k = b.axiom("NextK", phi=StrongPrev(t), psi=StrongPrev(phi))
    e = next_ys_elim(b, phi)
    fwd = boxdot_intro(b, b.taut(Implies(left, Implies(t, phi)), a, fp, k, e))
    bwd = ttp3_backward(b, m, phi)
    return b.taut(Iff(left, right), fwd, bwd)


def ttp4_backward(b, m, phi):
    """``true_m(phi) -> true_{m+1}(Yw phi)``."""
    t = Time(m)
    a = boxdot_to_wprev(b, Implies(t, phi))
    c = strong_weak_mp(b, t, phi)
    sw = b.axiom("SW", phi=phi)
    return boxdot_intro(b, b.taut(Implies(true_at(m, phi), Implies(Time(m + 1), WeakPrev(phi))), a, c, sw))


def ttp4_forward(b, m, phi):
    """``true_{m+1}(Yw phi) -> true_m(phi)``."""
    t, t1 = Time(m), Time(m + 1)
    a = boxdot_to_next(b, Implies(t1, WeakPrev(phi)))
    fp = b.axiom("FP", phi=t)
    k = b.axiom("NextK", phi=StrongPrev(t), psi=WeakPrev(phi))
    e = next_wprev_elim(b, phi)
    return boxdot_intro(b, b.taut(Implies(true_at(m + 1, WeakPrev(phi)), Implies(t, phi)), a, fp, k, e))


def ttp4(b, m, phi):
    fwd = ttp4_forward(b, m, phi)
    bwd = ttp4_backward(b, m, phi)
    return b.taut(Iff(true_at(m + 1, WeakPrev(phi)), true_at(m, phi)), fwd, bwd)


def ttp5(b, m, phi):
    t, t1 = Time(m), Time(m + 1)
    a = boxdot_to_next(b, Implies(t1, Sofar(phi)))
    fp = b.axiom("FP", phi=t)
    k = b.axiom("NextK", phi=StrongPrev(t), psi=Sofar(phi))
    w = mono(b, Next, lemma2_4(b, phi))
    e = next_wprev_elim(b, phi)
    return boxdot_intro(b, b.taut(Implies(true_at(m + 1, Sofar(phi)), Implies(t, phi)), a, fp, k, w, e))


def ttp6(b, m, phi):
    x = lemma2_5(b, phi)
    step = b.taut(Implies(AlwaysBoxdot(phi), Implies(Time(m), phi)), x)
    return boxdot_intro(b, step)


def ttp7(b, m, phi):
    x = lemma2_6(b, Implies(Time(m), phi))
    return b.taut(Iff(AlwaysBoxdot(true_at(m, phi)), true_at(m, phi)), x)


def ttp8(b, m, phi):
    """Hypothesis form: ``true_m(phi)`` yields ``time=m+1 -> Ys phi``."""
    h = b.hyp(true_at(m, phi))
    lifted = b.mp(h, ttp3_backward(b, m, phi))
    x = lemma2_5(b, Implies(Time(m + 1), StrongPrev(phi)))
    return b.mp(lifted, x)


def check_ttp_lemma(item: int, m: int, f: Formula, premise: ProofScript | None = None) -> ProofScript:
    """Script for one temporal-truth-predicate fact at instant ``m`` and body ``f``.

    Item 9 is the rule form: ``premise`` must prove ``phi -> psi`` without
    hypotheses and the result proves ``true_m(phi) -> true_m(psi)``.  Without a
    premise, ``f`` itself is used when it is a tautological implication and
    ``f -> ~~f`` otherwise.
    """
    if item not in range(1, 10):
        raise OutOfRange(f"item {item} is not in 1..9")
    if not 0 <= m <= 32:
        raise OutOfRange(f"instant {m} is not in 0..32")
    b = ScriptBuilder(f"ttp{item}-m{m}")
    if item == 9:
        if premise is not None:
            last = b.include(premise)
        else:
            from .axioms import taut_check

            body = f if isinstance(f, Implies) and taut_check(f) else Implies(f, Not(Not(f)))
            last = b.taut(body)
        ttp_rule(b, m, last)
        return b.build()
    if item == 8:
        ttp8(b, m, f)
        return b.build((true_at(m, f),))
    {1: ttp1, 2: ttp2, 3: ttp3, 4: ttp4, 5: ttp5, 6: ttp6, 7: ttp7}[item](b, m, f)
    return b.build()


# ---------------------------------------------------------------- no-conflicts equivalence


def no_conflicts_scripts(agent: str, term, phi: Formula) -> list[ProofScript]:
    """Both directions between the axiom's form and ``~(O phi & O ~phi)``."""
    from .syntax import OBox, OPermit

    o, o_neg = OBox(agent, term, phi), OBox(agent, term, Not(phi))
    axiom_form = Implies(o, OPermit(agent, term, phi))
    joint_form = Not(And(o, o_neg))
    out = []
    for name, a, c in (("noc-to-joint", axiom_form, joint_form), ("joint-to-noc", joint_form, axiom_form)):
        b = ScriptBuilder(name)
        b.taut(Implies(a, c))
        out.append(b.build())
    b = ScriptBuilder("noc-joint-theorem")
    ax = b.axiom("NoConflicts", phi=phi, t=term, agent=agent)
    b.taut(joint_form, ax)
    out.append(b.build())
    return out


__all__ = [
    "Library",
    "ScriptBuilder",
    "deduction",
    "lift_at",
    "derive_lemma2",
    "check_ttp_lemma",
    "no_conflicts_scripts",
]


# ---------------------------------------------------------------- deduction theorem and lifting


class Library(dict):
    """Scripts by name in dependency order, plus names for generated helper scripts."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._made: dict[tuple, str] = {}

    def put(self, script: ProofScript) -> ProofScript:
        old = self.get(script.name)
        if old is not None and desugar(old.goal) != desugar(script.goal):
            raise ValueError(f"two different scripts named {script.name}")
        self.setdefault(script.name, script)
        return self[script.name]

    def made(self, key: tuple) -> ProofScript | None:
        name = self._made.get(key)
        return None if name is None else self[name]

    def remember(self, key: tuple, script: ProofScript) -> ProofScript:
        self.put(script)
        self._made[key] = script.name
        return script

    def fresh(self, base: str) -> str:
        k = 1
        while f"{base}.{k}" in self:
            k += 1
        return f"{base}.{k}"


def prefix(script: ProofScript, index: int) -> ProofScript:
    """The script cut after line ``index``, concluding that line's formula."""
    lines = [line for line in script.lines if line.index <= index]
    last = lines[-1]
    return ProofScript(f"{script.name}@{index}", tuple(sorted(last.hypotheses, key=str)), last.formula, lines,
                       cs=script.cs, requires=script.requires)


def discharge_all(script: ProofScript, library: Library) -> ProofScript:
    """A theorem ``h1 -> (h2 -> ... -> goal)`` over every goal hypothesis of ``script``."""
    key = ("all", script.name)
    done = library.made(key)
    if done is not None:
        return done
    out = script
    for h in reversed(script.goal_hypotheses):
        out = deduction(out, h, library)
        library.put(out)
    if out is script:
        return script
    return library.remember(key, out)


def deduction(script: ProofScript, h: Formula, library: Library, name: str | None = None) -> ProofScript:
    """From an accepted script for ``{h} ∪ T ⊢ φ`` build one for ``T ⊢ h -> φ``.

    Helper scripts the result cites are added to ``library`` first; ``script``
    itself and every script it cites must already be there (or be ``script``).
    """
    hc = desugar(h)
    key = ("dt", script.name, hc)
    done = library.made(key)
    if done is not None:
        return done
    if script.name not in library:
        library.put(script)
    b = ScriptBuilder(name or library.fresh(f"{script.name}.dt"))
    new: dict[int, int] = {}
    dep: dict[int, bool] = {}

    def has_h(fs) -> bool:
        return any(desugar(x) == hc for x in fs)

    def minus_h(fs) -> frozenset[Formula]:
        return frozenset(x for x in fs if desugar(x) != hc)

    def under(i: int, f: Formula) -> Formula:
        return Implies(h, f) if dep[i] else f

    by_index = {line.index: line for line in script.lines}
    for line in script.lines:
        i, f, j = line.index, line.formula, line.justification
        is_dep = has_h(line.hypotheses)
        rest = minus_h(line.hypotheses)
        refs_dep = any(dep.get(r, False) for r in j.refs)
        if j.rule == "Hyp" and desugar(f) == hc:
            new[i] = b.taut(Implies(h, h))
        elif j.rule in ("Taut", "MP") and refs_dep:
            new[i] = b.add(Implies(h, f), "Taut", tuple(new[r] for r in j.refs),
                           hyps=rest | frozenset().union(*(b.hyps(new[r]) for r in j.refs)), comment=line.comment)
        elif j.rule == "Weaken" and refs_dep:
            new[i] = b.add(Implies(h, f), "Weaken", (new[j.refs[0]],), hyps=rest, comment=line.comment)
        elif j.rule == "BoxdotLift":
            new[i] = _dt_lift(b, script, by_index, line, h, library, new, dep, is_dep)
        elif j.rule == "Lemma" and (refs_dep or (is_dep and _cites_h(library, j.name, hc, by_index, j.refs))):
            new[i] = _dt_lemma(b, line, h, library, new, by_index)
        else:
            copied = b.add(f, j.rule, tuple(new[r] for r in j.refs), j.name, rest, line.comment)
            new[i] = b.taut(Implies(h, f), copied) if is_dep else copied
        dep[i] = is_dep
        if j.rule == "Lemma" and j.name not in b.requires:
            b.requires.append(j.name)
    last = script.lines[-1]
    goal_index = new[last.index]
    if not dep[last.index]:
        goal_index = b.taut(Implies(h, last.formula), goal_index)
    out = b.build(tuple(x for x in script.goal_hypotheses if desugar(x) != hc))
    if not out.goal_hypotheses:
        out.goal_hypotheses = ()
    out.requires = tuple(dict.fromkeys(list(script.requires) + b.requires))
    return library.remember(key, out)


def _cites_h(library, name, hc, by_index, refs) -> bool:
    cited = library[name]
    discharged = {desugar(by_index[r].formula) for r in refs}
    return any(desugar(g) == hc and desugar(g) not in discharged for g in cited.goal_hypotheses)


def _dt_lemma(b: ScriptBuilder, line: ProofLine, h: Formula, library: Library, new, by_index) -> int:
    hc = desugar(h)
    j = line.justification
    cited = library[j.name]
    theorem = discharge_all(cited, library)
    premises = [b.lemma(theorem)]
    by_formula = {desugar(by_index[r].formula): new[r] for r in j.refs}
    for g in cited.goal_hypotheses:
        gc = desugar(g)
        if gc in by_formula:
            premises.append(by_formula[gc])
        elif gc != hc:
            premises.append(b.hyp(g))
    return b.taut(Implies(h, line.formula), *premises, comment=line.comment)


def _dt_lift(b: ScriptBuilder, script, by_index, line, h, library, new, dep, is_dep) -> int:
    hc = desugar(h)
    r = line.justification.refs[0]
    premise = by_index[r]
    inner = next((x for x in premise.hypotheses if desugar(AlwaysBoxdot(x)) == hc), None)
    if inner is None:
        if dep[r]:
            cut = library.put(prefix(script, r))
            lifted = b.lift(b.lemma(cut), comment=line.comment)
        else:
            lifted = b.add(line.formula, "BoxdotLift", (new[r],),
                           hyps=frozenset(AlwaysBoxdot(x) for x in premise.hypotheses), comment=line.comment)
        return b.taut(Implies(h, line.formula), lifted) if is_dep else lifted
    cut = library.put(prefix(script, r))
    opened = deduction(cut, inner, library)
    lifted = b.lift(b.lemma(opened))
    k = boxdot_k(b, inner, premise.formula)
    return b.taut(Implies(h, line.formula), lifted, k, comment=line.comment)


def lift_at(core: ProofScript, m: int, local: tuple[Formula, ...], library: Library, name: str | None = None) -> ProofScript:
    """Turn ``G ∪ L ⊢ φ`` into ``G', true_m(L) ⊢ true_m(φ)``.

    ``L`` are the local hypotheses (``time=m`` among them is simply dropped).
    A global hypothesis that is itself of the form ``A x`` stays as it is and
    every other global ``g`` becomes ``A g``.
    """
    library.put(core)
    opened = core
    for x in reversed(local):
        opened = deduction(opened, x, library)
    t = Time(m)
    base = name or f"{core.name}.lift"
    b = ScriptBuilder(f"{base}.boxed")
    top = b.lemma(opened)
    extra = []
    for x in local:
        if desugar(x) != desugar(t):
            extra.append(b.hyp(Implies(t, x)))
    step = b.taut(Implies(t, core.goal), top, *extra)
    b.lift(step)
    boxed = library.put(b.build())
    b = ScriptBuilder(base)
    refs = []
    for g in boxed.goal_hypotheses:
        g_core = desugar(g)
        inner = g.sub if isinstance(g, AlwaysBoxdot) else None
        if inner is not None and isinstance(inner, AlwaysBoxdot) and any(
            desugar(AlwaysBoxdot(x)) == g_core for x in core.goal_hypotheses
        ):
            hy = b.hyp(inner)
            refs.append(b.mp(hy, boxdot_four(b, inner.sub)))
    b.lemma(boxed, *refs)
    return library.put(b.build())
