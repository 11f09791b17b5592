"""Proof scripts of the case study.

Steps that the informal arguments justify with "by court and the temporal
truth predicate" are single ``Lemma`` lines citing small helper scripts, so
each main script keeps the line structure of the argument it formalizes.
Everything is rechecked by the kernel; nothing here is trusted.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

from ..kernel import ProofLine, ProofScript
from ..proofs import (
    Library,
    ScriptBuilder,
    boxdot_k,
    boxdot_mono,
    lemma2_2,
    lemma2_3,
    lemma2_5,
    lemma2_7,
    lift_at,
    mono,
    ttp1,
    ttp3_backward,
    ttp4_backward,
    ttp4_forward,
    ttp_rule,
)
from ..syntax import (
    BOT,
    And,
    Atom,
    Formula,
    Implies,
    Next,
    Not,
    Once,
    Or,
    Sofar,
    StrongPrev,
    Time,
    WeakPrev,
    forgetful_projection,
    true_at,
)
from .formulas import F

PAY = Atom("pay")
WIN = Atom("win_p")
WF = Atom("winfirst_e")
T10 = Time(10)


def _body(name: str) -> Formula:
    """``B`` for a formula ``A B`` or ``true_m(B)`` (the consequent in the latter case)."""
    f = F(name).sub
    return f.right if isinstance(f, Implies) and isinstance(f.left, Time) else f


def _axiom_taut(b: ScriptBuilder, f: Formula, comment: str = "") -> int:
    return b.add(f, "Axiom", name="Taut", comment=comment)


# ---------------------------------------------------------------- helper scripts


def consequence(lib: Library, name: str, hyps: tuple[Formula, ...], goal: Formula,
                theorems: Callable[[ScriptBuilder], list[int]] = lambda b: []) -> ProofScript:
    """``hyps ⊢ goal`` by one propositional step over the hypotheses and some theorems."""
    if name in lib:
        return lib[name]
    b = ScriptBuilder(name, hyps)
    refs = [b.hyp(h) for h in hyps]
    refs += theorems(b)
    b.taut(goal, *refs)
    return lib.put(b.build())


def at_time(lib: Library, name: str, m: int, body: Formula, extra: tuple[Formula, ...], goal: Formula) -> ProofScript:
    """``true_m(body), time=m, extra ⊢ goal`` where goal follows propositionally from body and extra."""
    return consequence(lib, name, (true_at(m, body), Time(m)) + extra, goal, lambda b: [ttp1(b, m, body)])


def from_boxdot(lib: Library, name: str, boxed: Formula, extra: tuple[Formula, ...], goal: Formula) -> ProofScript:
    """``A body, extra ⊢ goal`` where goal follows propositionally from body and extra."""
    return consequence(lib, name, (boxed,) + extra, goal, lambda b: [lemma2_5(b, boxed.sub)])


def by_theorem(lib: Library, name: str, premise: Formula, goal: Formula,
               theorem: Callable[[ScriptBuilder], int]) -> ProofScript:
    """``premise ⊢ goal`` from a theorem ``premise -> goal`` built by ``theorem``."""
    if name in lib:
        return lib[name]
    b = ScriptBuilder(name, (premise,))
    h = b.hyp(premise)
    b.mp(h, theorem(b))
    return lib.put(b.build())


def true_mp(lib: Library, m: int, a: Formula, c: Formula, name: str) -> ProofScript:
    """``true_m(a -> c), true_m(a) ⊢ true_m(c)``."""
    t = Time(m)

    def theorems(b):
        step = b.taut(Implies(Implies(t, Implies(a, c)), Implies(Implies(t, a), Implies(t, c))))
        lifted = boxdot_mono(b, step)
        return [lifted, boxdot_k(b, Implies(t, a), Implies(t, c))]

    return consequence(lib, name, (true_at(m, Implies(a, c)), true_at(m, a)), true_at(m, c), theorems)


def true_conj(lib: Library, m: int, a: Formula, c: Formula, name: str) -> ProofScript:
    """``true_m(a), true_m(c) ⊢ true_m(a & c)``."""
    t = Time(m)

    def theorems(b):
        step = b.taut(Implies(Implies(t, a), Implies(Implies(t, c), Implies(t, And(a, c)))))
        lifted = boxdot_mono(b, step)
        return [lifted, boxdot_k(b, Implies(t, c), Implies(t, And(a, c)))]

    return consequence(lib, name, (true_at(m, a), true_at(m, c)), true_at(m, And(a, c)), theorems)


def true_rule(lib: Library, m: int, a: Formula, c: Formula, name: str,
              theorem: Callable[[ScriptBuilder], int]) -> ProofScript:
    """``true_m(a) ⊢ true_m(c)`` from a theorem ``a -> c``."""
    return by_theorem(lib, name, true_at(m, a), true_at(m, c), lambda b: ttp_rule(b, m, theorem(b)))


def sofar_at(lib: Library, top: int, k: int, phi: Formula, name: str) -> ProofScript:
    """``true_top(H phi) ⊢ true_k(phi)`` for ``k <= top``."""

    def theorem(b):
        h = Sofar(phi)
        unfold = lemma2_3(b, phi)
        step = b.taut(Implies(h, WeakPrev(h)), unfold)
        links = []
        for n in range(top, k, -1):
            links.append(ttp_rule(b, n, step))
            links.append(ttp4_forward(b, n - 1, h))
        links.append(ttp_rule(b, k, b.taut(Implies(h, phi), unfold)))
        return b.taut(Implies(true_at(top, h), true_at(k, phi)), *links)

    return by_theorem(lib, name, true_at(top, Sofar(phi)), true_at(k, phi), theorem)


# ---------------------------------------------------------------- the first formalization


def protagoras(lib: Library) -> ProofScript:
    court = _body("court")
    win_o = Implies(WIN, F("protagoras_goal").left)
    lose_wf = Implies(Not(WIN), WF)
    wf_o = Implies(WF, F("protagoras_goal").right)
    s_win = at_time(lib, "court-win", 10, court, (), win_o)
    s_lose = at_time(lib, "court-lose", 10, court, (), lose_wf)
    s_contract = from_boxdot(lib, "contract-forward", F("contract"), (), wf_o)
    b = ScriptBuilder("protagoras", (F("contract"), F("court"), T10),
                      comment="If I win, the verdict obliges him; if I lose, the agreement does.")
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(s_win, l1, comment="by court at time 10")
    l3 = b.lemma(s_lose, l1, comment="by court at time 10")
    l4 = b.lemma(s_contract, comment="by contract")
    l5 = b.taut(Implies(Not(WIN), wf_o.right), l3, l4, comment="from 3 and 4")
    l6 = _axiom_taut(b, Or(WIN, Not(WIN)), comment="excluded middle")
    b.taut(F("protagoras_goal"), l2, l5, l6, comment="from 2, 5 and 6")
    return lib.put(b.build())


def euathlus(lib: Library) -> ProofScript:
    court = _body("court")
    o_a, o_v = F("euathlus_goal").left.sub, F("euathlus_goal").right.sub
    s_win = at_time(lib, "court-win-nowf", 10, court, (), Implies(WIN, Not(WF)))
    s_contract = from_boxdot(lib, "contract-backward", F("contract"), (), Implies(Not(WF), Not(o_a)))
    s_lose = at_time(lib, "court-lose-noverdict", 10, court, (), Implies(Not(WIN), Not(o_v)))
    b = ScriptBuilder("euathlus", (F("contract"), F("court"), T10),
                      comment="If he wins, I have not won my first case; if I win, the verdict frees me.")
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(s_win, l1, comment="by court at time 10")
    l3 = b.lemma(s_contract, comment="by contract")
    l4 = b.taut(Implies(WIN, Not(o_a)), l2, l3, comment="from 2 and 3")
    l5 = b.lemma(s_lose, l1, comment="by court at time 10")
    l6 = _axiom_taut(b, Or(WIN, Not(WIN)), comment="excluded middle")
    b.taut(F("euathlus_goal"), l4, l5, l6, comment="from 4, 5 and 6")
    return lib.put(b.build())


# ---------------------------------------------------------------- the refined formalization


def protagoras2(lib: Library) -> ProofScript:
    court, contract = _body("court2"), F("contract2")
    goal = F("protagoras2_goal")
    s_win = at_time(lib, "court2-win", 10, court, (), Implies(WIN, goal.left))
    s_lose = at_time(lib, "court2-lose", 10, court, (), Implies(Not(WIN), WF))
    s_contract = from_boxdot(lib, "contract2-forward", contract, (), Implies(WF, goal.right))
    b = ScriptBuilder("protagoras2", (contract, F("court2"), T10))
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(s_win, l1, comment="by court2 at time 10")
    l3 = b.lemma(s_lose, l1, comment="by court2 at time 10")
    l4 = b.lemma(s_contract, comment="by contract2")
    l5 = b.taut(Implies(Not(WIN), goal.right), l3, l4, comment="from 3 and 4")
    l6 = _axiom_taut(b, Or(WIN, Not(WIN)), comment="excluded middle")
    b.taut(goal, l2, l5, l6, comment="from 2, 5 and 6")
    return lib.put(b.build())


def euathlus2(lib: Library) -> ProofScript:
    court, contract = _body("court2"), F("contract2")
    goal = F("euathlus2_goal")
    x_not_a, x_not_v = goal.left, goal.right
    w = contract.sub.left
    not_v = x_not_v.sub
    s_win = at_time(lib, "court2-win-nowf", 10, court, (), Implies(WIN, Not(WF)))
    s_contract = from_boxdot(lib, "contract2-backward", contract, (), w)
    unfolded = Implies(WIN, And(x_not_a, Next(w)))
    s_unfold = consequence(lib, "weak-until-unfold", (Implies(WIN, And(Not(WF), w)),), unfolded,
                           lambda b: [lemma2_7(b, w.left, w.right)])
    s_lose = at_time(lib, "court2-lose-noverdict", 10, court, (), Implies(Not(WIN), F("court2").sub.right.right.right))
    s_next = consequence(lib, "always-next", (Implies(Not(WIN), F("court2").sub.right.right.right),),
                         Implies(Not(WIN), x_not_v), lambda b: [lemma2_2(b, not_v)])
    b = ScriptBuilder("euathlus2", (contract, F("court2"), T10))
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(s_win, l1, comment="by court2 at time 10")
    l3 = b.lemma(s_contract, comment="by contract2")
    l4 = b.taut(Implies(WIN, w), l3, comment="from 3")
    l5 = b.taut(Implies(WIN, And(Not(WF), w)), l2, l4, comment="from 2 and 4")
    l6 = b.lemma(s_unfold, l5, comment="from 5 by unfolding the weak until")
    l7 = b.taut(Implies(WIN, x_not_a), l6, comment="from 6")
    l8 = b.lemma(s_lose, l1, comment="by court2 at time 10")
    l9 = b.lemma(s_next, l8, comment="from 8, always implies next")
    l10 = _axiom_taut(b, Or(WIN, Not(WIN)), comment="excluded middle")
    b.taut(goal, l7, l9, l10, comment="from 7, 9 and 10")
    return lib.put(b.build())


def protagoras2_next(lib: Library, prot2: ProofScript) -> ProofScript:
    goal = F("protagoras2_goal")
    s_nopay = at_time(lib, "nopay-at-10", 10, Not(PAY), (), Not(PAY))
    b = ScriptBuilder("protagoras2-next", (F("contract2"), F("court2"), T10, F("nopay10")))
    l1 = b.hyp(T10)
    l2 = b.lemma(prot2, l1)
    l3 = b.lemma(s_nopay, l1)
    u1 = lemma2_7(b, goal.left.left, PAY)
    u2 = lemma2_7(b, goal.right.left, PAY)
    b.taut(F("protagoras2_next"), l2, l3, u1, u2)
    return lib.put(b.build())


def euathlus2_next(lib: Library, eu2: ProofScript) -> ProofScript:
    goal = F("euathlus2_goal")
    b = ScriptBuilder("euathlus2-next", (F("contract2"), F("court2"), T10))
    l1 = b.hyp(T10)
    l2 = b.lemma(eu2, l1)
    f1 = b.axiom("Fun", phi=goal.left.sub.sub)
    f2 = b.axiom("Fun", phi=goal.right.sub.sub)
    b.taut(F("euathlus2_next"), l2, f1, f2)
    return lib.put(b.build())


# ---------------------------------------------------------------- projection to term-free obligations


def project(script: ProofScript, lib: Library) -> ProofScript:
    """The same derivation with every obligation's reason erased."""
    name = f"{script.name}.sdl"
    if name in lib:
        return lib[name]
    for dep in script.requires:
        project(lib[dep], lib)
    lines = []
    for line in script.lines:
        j = line.justification
        if j.rule == "Lemma":
            j = type(j)(j.rule, j.refs, f"{j.name}.sdl")
        lines.append(ProofLine(line.index, frozenset(forgetful_projection(h) for h in line.hypotheses),
                               forgetful_projection(line.formula), j, line.comment))
    out = ProofScript(name, tuple(forgetful_projection(h) for h in script.goal_hypotheses),
                      forgetful_projection(script.goal), lines, script.cs, script.comment,
                      tuple(f"{r}.sdl" for r in script.requires))
    return lib.put(out)


def sdl_contradiction(lib: Library, prot: ProofScript, eu: ProofScript) -> ProofScript:
    p, e = project(prot, lib), project(eu, lib)
    b = ScriptBuilder("sdl-contradiction", (F("contract_sdl"), F("court_sdl"), T10))
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(p, l1, comment="Protagoras' argument without reasons")
    l3 = b.lemma(e, l1, comment="Euathlus' argument without reasons")
    b.taut(BOT, l2, l3, comment="the two conclusions clash")
    return lib.put(b.build())


def sdl2_contradiction(lib: Library, prot: ProofScript, eu: ProofScript) -> ProofScript:
    p, e = project(prot, lib), project(eu, lib)
    nopay = F("nopay10")
    b = ScriptBuilder("sdl2-contradiction", (F("contract2_sdl"), F("court2_sdl"), T10, nopay))
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(p, l1, comment="Protagoras' refined argument without reasons")
    l3 = b.lemma(e, l1, comment="Euathlus' refined argument without reasons")
    b.taut(BOT, l2, l3, comment="the two conclusions clash")
    return lib.put(b.build())


# ---------------------------------------------------------------- permission to sue


def no_permission(lib: Library) -> tuple[ProofScript, ProofScript]:
    """The nine-line core and its lifting to ``PsueE, No-win-first ⊢ true_5(~P[a]_p sue_p)``."""
    iff = F("psue").sub
    permit, rhs = iff.left, iff.right
    y = rhs.left.sub
    h_nowf = Sofar(Not(WF))
    s_step = consequence(lib, "sofar-step", (h_nowf,), WeakPrev(h_nowf), lambda b: [lemma2_3(b, Not(WF))])
    l4f = WeakPrev(Not(Once(Not(Not(WF)))))
    l5f = WeakPrev(Not(Once(WF)))

    def double_negation(b):
        t = b.taut(Implies(WF, Not(Not(WF))))
        o = b.once_rm(t)
        c = b.taut(Implies(Not(Once(Not(Not(WF)))), Not(Once(WF))), o)
        return mono(b, WeakPrev, c)

    s_dn = by_theorem(lib, "once-double-negation", l4f, l5f, double_negation)
    l6f = Not(StrongPrev(Once(WF)))
    l7f = Not(StrongPrev(y))

    def since_once(b):
        s1 = b.axiom("Since1", phi=y.left, psi=y.right)
        m = mono(b, StrongPrev, s1)
        return b.taut(Implies(l6f, l7f), m)

    s_since = by_theorem(lib, "since-once", l6f, l7f, since_once)
    b = ScriptBuilder("no-permission-core", (iff, h_nowf))
    l1 = b.hyp(iff, comment="hypothesis")
    l2 = b.hyp(h_nowf, comment="hypothesis")
    l3 = b.lemma(s_step, l2, comment="from 2")
    l4 = b.taut(l4f, l3, comment="from 3, unfolding H")
    l5 = b.lemma(s_dn, l4, comment="from 4 by monotonicity of P-")
    l6 = b.taut(l6f, l5, comment="from 5, unfolding Ys")
    l7 = b.lemma(s_since, l6, comment="from 6 and Since1")
    l8 = b.taut(Or(l7f, PAY), l7, comment="from 7")
    b.taut(Not(permit), l1, l8, comment="from 1 and 8")
    core = lib.put(b.build())
    lifted = lift_at(core, 5, (h_nowf,), lib, name="no-permission")
    return core, lifted


def no_obligation(lib: Library) -> tuple[ProofScript, ProofScript]:
    """``contract, No-win-first ⊢ true_5(H ~O[a]_e pay)``."""
    contract = F("contract")
    body = contract.sub
    o = body.right
    h_nowf, h_noo = Sofar(Not(WF)), Sofar(Not(o))

    def theorem(b):
        t = b.taut(Implies(body, Implies(Not(WF), Not(o))))
        m = mono(b, Sofar, t)
        k = b.axiom("SofarK", phi=Not(WF), psi=Not(o))
        return [m, k]

    aux = consequence(lib, "contract-sofar", (contract, h_nowf), h_noo, theorem)
    b = ScriptBuilder("no-obligation-core", (contract, h_nowf))
    l1 = b.hyp(contract)
    l2 = b.hyp(h_nowf)
    b.lemma(aux, l1, l2)
    core = lib.put(b.build())
    return core, lift_at(core, 5, (h_nowf,), lib, name="no-obligation")


def judge_first(lib: Library) -> tuple[ProofScript, ProofScript]:
    """The six-line core of the first verdict and its lifting to ``true_10(...)``."""
    nowf2 = _body("nowinfirst2")
    pl = _body("pastlooking")
    court = _body("court")
    o = F("contract").sub.right
    s2 = at_time(lib, "nowinfirst2-at-10", 10, nowf2, (), nowf2)
    s3 = at_time(lib, "pastlooking-at-10", 10, pl, (nowf2,), Not(WIN))
    s4 = at_time(lib, "court-lose-wf", 10, court, (Not(WIN),), WF)
    s5 = from_boxdot(lib, "contract-wf", F("contract"), (WF,), o)
    hyps = (F("contract"), F("court"), F("nowinfirst2"), F("pastlooking"), T10)
    b = ScriptBuilder("judge1-core", hyps)
    l1 = b.hyp(T10, comment="hypothesis")
    l2 = b.lemma(s2, l1, comment="from 1 and nowinfirst2")
    l3 = b.lemma(s3, l1, l2, comment="from 2 and pastlooking")
    l4 = b.lemma(s4, l1, l3, comment="from 1, 3 and court")
    l5 = b.lemma(s5, l4, comment="from 4 and contract")
    b.taut(_body("verdict1"), l3, l4, l5, comment="from 3, 4 and 5")
    core = lib.put(b.build())
    return core, lift_at(core, 10, (T10,), lib, name="judge1")


def _since_chain(lib: Library, b: ScriptBuilder, start: int, line: int, y: Formula, last: int,
                 nopay_line: int, tag: str) -> int:
    """From ``true_start(y)`` at ``line`` reach ``true_last(Ys y & ~pay)``; returns that line."""
    step_y = And(StrongPrev(y), Not(PAY))
    for k in range(start + 1, last + 1):
        s_step = by_theorem(lib, f"{tag}-step-{k}", true_at(k - 1, y), true_at(k, StrongPrev(y)),
                            lambda bb, k=k: ttp3_backward(bb, k - 1, y))
        s_nopay = sofar_at(lib, last, k, Not(PAY), f"nopay-{last}-at-{k}")
        s_conj = true_conj(lib, k, StrongPrev(y), Not(PAY), f"{tag}-conj-{k}")
        a = b.lemma(s_step, line, comment=f"time {k}: the chain holds one step later")
        n = b.lemma(s_nopay, nopay_line, comment=f"time {k}: no payment")
        c = b.lemma(s_conj, a, n, comment=f"time {k}: both")
        if k == last:
            return c

        def close(bb):
            s2 = bb.axiom("Since2", phi=Not(PAY), psi=y.right)
            return bb.taut(Implies(step_y, y), s2)

        s_close = true_rule(lib, k, step_y, y, f"{tag}-close-{k}", close)
        line = b.lemma(s_close, c, comment=f"time {k}: the since formula, by Since2")
    return line


def permitted_to_sue(lib: Library) -> ProofScript:
    """``true_10(winfirst_e), true_15(H ~pay), PsueE ⊢ true_15(P[a]_p sue_p)`` in 24 lines."""
    psue = F("psue")
    permit, rhs = psue.sub.left, psue.sub.right
    y = rhs.left.sub

    def base(bb):
        s2 = bb.axiom("Since2", phi=y.left, psi=WF)
        return bb.taut(Implies(WF, y), s2)

    s_base = true_rule(lib, 10, WF, y, "since-base-10", base)

    def permit_theorem(bb):
        t = Time(15)
        step = bb.taut(Implies(psue.sub, Implies(Implies(t, rhs), Implies(t, permit))))
        return [boxdot_mono(bb, step), boxdot_k(bb, Implies(t, rhs), Implies(t, permit))]

    s_permit = consequence(lib, "psue-at-15", (psue, true_at(15, rhs)), true_at(15, permit), permit_theorem)
    b = ScriptBuilder("permitted-to-sue", (F("winfirst10"), F("nopay15"), psue))
    l1 = b.hyp(F("winfirst10"), comment="hypothesis")
    l2 = b.hyp(F("nopay15"), comment="hypothesis")
    l3 = b.hyp(psue, comment="hypothesis")
    l4 = b.lemma(s_base, l1, comment="from 1 and Since2")
    last = _since_chain(lib, b, 10, l4, y, 15, l2, "sue")
    b.lemma(s_permit, l3, last, comment="from 3 and the previous line")
    return lib.put(b.build())


def judge_second(lib: Library) -> ProofScript:
    """The second verdict, along the chain ``~pay S Yw winfirst_e`` used by the win-second assumption."""
    ws = F("winsecond")
    cond = ws.sub.right.left
    x = cond.left.sub
    s_prev = by_theorem(lib, "winfirst-prev-11", F("winfirst10"), true_at(11, WeakPrev(WF)),
                        lambda bb: ttp4_backward(bb, 10, WF))

    def base(bb):
        s2 = bb.axiom("Since2", phi=x.left, psi=x.right)
        return bb.taut(Implies(x.right, x), s2)

    s_base = true_rule(lib, 11, x.right, x, "since-prev-base-11", base)
    s_mp = true_mp(lib, 15, cond, Atom("winsecond_p"), "winsecond-at-15")
    b = ScriptBuilder("judge2", (F("winfirst10"), F("nopay15"), F("psue"), ws))
    l1 = b.hyp(F("winfirst10"), comment="hypothesis")
    l2 = b.hyp(F("nopay15"), comment="hypothesis")
    l3 = b.lemma(s_prev, l1, comment="from 1")
    l4 = b.lemma(s_base, l3, comment="from 3 and Since2")
    last = _since_chain(lib, b, 11, l4, x, 15, l2, "judge")
    l5 = b.hyp(ws, comment="hypothesis")
    b.lemma(s_mp, l5, last, comment="the win-second assumption")
    return lib.put(b.build())


# ---------------------------------------------------------------- everything


MAIN_SCRIPTS = (
    "protagoras",
    "euathlus",
    "protagoras2",
    "euathlus2",
    "no-permission-core",
    "permitted-to-sue",
    "judge1-core",
)


@lru_cache(maxsize=None)
def _build() -> Library:
    lib = Library()
    prot, eu = protagoras(lib), euathlus(lib)
    prot2, eu2 = protagoras2(lib), euathlus2(lib)
    protagoras2_next(lib, prot2)
    euathlus2_next(lib, eu2)
    sdl_contradiction(lib, prot, eu)
    p_next, e_next = lib["protagoras2-next"], lib["euathlus2-next"]
    sdl2_contradiction(lib, p_next, e_next)
    no_obligation(lib)
    no_permission(lib)
    judge_first(lib)
    permitted_to_sue(lib)
    judge_second(lib)
    return lib


def case_scripts() -> Library:
    """Every case-study script with its helpers, in an order the kernel can check them."""
    lib = Library()
    for name, script in _build().items():
        lib[name] = script
    return lib


def script(name: str) -> ProofScript:
    return _build()[name]


def closure(name: str) -> list[ProofScript]:
    """``name`` preceded by every script it depends on, in checking order."""
    lib = _build()
    seen: dict[str, ProofScript] = {}

    def visit(n: str) -> None:
        if n in seen:
            return
        s = lib[n]
        for dep in s.requires:
            visit(dep)
        seen[n] = s

    visit(name)
    return list(seen.values())


__all__ = ["MAIN_SCRIPTS", "case_scripts", "closure", "script"]
