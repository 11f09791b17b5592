import random

import pytest

from jto.axioms import AXIOM_NAMES, RAW_SCHEMAS, instantiate, match_axiom, taut_check
from jto.corpus.cases import UNIVERSES, model, universe
from jto.corpus.scripts import MAIN_SCRIPTS, case_scripts, closure, script
from jto.errors import OutOfRange, TooManyAtoms
from jto.generate import random_fitting_model
from jto.kernel import (
    EMPTY_CS,
    ConstantSpecification,
    Justification,
    ProofLine,
    ProofScript,
    Registry,
    check_bundle,
    check_cs,
    check_proof,
)
from jto.parser import parse_formula as P
from jto.printer import pretty
from jto.proofs import Library, ScriptBuilder, check_ttp_lemma, deduction, derive_lemma2, no_conflicts_scripts
from jto.semantics import failures
from jto.syntax import Atom, Implies, Var, desugar, true_at
from jto.validation import Universe

BINDING = dict(phi=Atom("p"), psi=Atom("q"), t=Var("x"), s=Var("y"), agent="1")


def accept(s: ProofScript, registry: Registry | None = None, cs=EMPTY_CS):
    return check_proof(s, cs, registry or Registry())


# ---------------------------------------------------------------- axioms


def test_factivity_instance():
    assert match_axiom(desugar(P("[t]_1 p -> p"))) == {"Factivity"}


def test_obligated_factivity_instance():
    assert match_axiom(desugar(P("O[#t]_1 (O[t]_1 p -> p)"))) == {"ObligatedFactivity"}


def test_tautology_matches_only_taut():
    assert match_axiom(desugar(P("p -> p"))) == {"Taut"}


def test_application_needs_the_product_term():
    assert match_axiom(desugar(P("[x]_1 (p -> q) -> [y]_1 p -> [x*y]_1 q"))) == {"Application"}
    assert "Application" not in match_axiom(desugar(P("[x]_1 (p -> q) -> [y]_1 p -> [y*x]_1 q")))


def test_no_conflicts_uses_one_term():
    assert "NoConflicts" in match_axiom(desugar(P("O[x]_1 p -> P[x]_1 p")))
    assert "NoConflicts" not in match_axiom(desugar(P("O[x]_1 p -> P[y]_1 p")))


def test_twenty_three_schemas():
    assert len(AXIOM_NAMES) == 23
    assert AXIOM_NAMES[0] == "Taut"


@pytest.mark.parametrize("name", list(RAW_SCHEMAS))
def test_canonical_instance_matches_its_own_schema(name):
    for variant in range(len(RAW_SCHEMAS[name])):
        assert match_axiom(desugar(instantiate(name, variant, **BINDING))) == {name}


def test_taut_check():
    assert taut_check(desugar(P("win | ~win")))
    assert taut_check(desugar(P("[t]_1 p -> [t]_1 p")))
    assert not taut_check(desugar(P("[t]_1 p -> p")))


def test_taut_check_atom_cap():
    f = P(" | ".join(f"a{k}" for k in range(21)) + " | ~a0")
    with pytest.raises(TooManyAtoms):
        taut_check(desugar(f))


# ---------------------------------------------------------------- constant specifications


def test_empty_cs_is_valid():
    assert check_cs(EMPTY_CS).ok


def test_cs_downward_closure_violation():
    cs = ConstantSpecification(frozenset({P("[$c]_1 [$d]_2 (p -> q -> p)")}))
    assert [v.kind for v in check_cs(cs).violations] == ["downward-closure"]
    closed = ConstantSpecification(cs.entries | {P("[$d]_2 (p -> q -> p)")})
    assert check_cs(closed).ok


def test_cs_inner_formula_must_be_an_axiom():
    cs = ConstantSpecification(frozenset({P("[$c]_1 (p & q)")}))
    assert [v.kind for v in check_cs(cs).violations] == ["inner-not-axiom"]


def test_cs_prefix_must_be_homogeneous():
    cs = ConstantSpecification(frozenset({P("[$c]_1 O[$d]_1 (p -> p)"), P("O[$d]_1 (p -> p)")}))
    assert [v.kind for v in check_cs(cs).violations] == ["mixed-prefix"]


def test_cs_entries_license_iax_nec():
    entry = P("[$c]_1 (p -> p)")
    b = ScriptBuilder("iax")
    b.add(entry, "IaxNec")
    s = b.build()
    assert not accept(s).accepted
    assert accept(s, cs=ConstantSpecification(frozenset({entry}))).accepted


# ---------------------------------------------------------------- rules


def test_necessitation_under_hypotheses_is_a_leak():
    s = ProofScript(
        "leak",
        (Atom("p"),),
        P("G p"),
        [
            ProofLine(1, frozenset({Atom("p")}), Atom("p"), Justification("Hyp")),
            ProofLine(2, frozenset({Atom("p")}), P("G p"), Justification("NecG", (1,))),
        ],
    )
    report = accept(s)
    assert report.verdict == "REJECT"
    assert report.diagnostics[0].kind == "HypothesisLeak"


def test_modus_ponens_checks_the_major_premise():
    b = ScriptBuilder("mp")
    h1 = b.hyp(Atom("p"))
    h2 = b.hyp(P("p -> q"))
    b.mp(h1, h2)
    assert accept(b.build()).accepted
    bad = b.build()
    bad.lines[-1] = ProofLine(3, bad.lines[-1].hypotheses, Atom("r"), bad.lines[-1].justification)
    bad.goal = Atom("r")
    assert accept(bad).diagnostics[0].kind == "SideConditionFailed"


def test_goal_mismatch():
    b = ScriptBuilder("goal")
    b.taut(P("p -> p"))
    s = b.build()
    s.goal = P("q -> q")
    assert "GoalMismatch" in {d.kind for d in accept(s).diagnostics}


def test_hypotheses_must_be_covered_by_the_goal():
    b = ScriptBuilder("cover")
    b.hyp(Atom("p"))
    s = b.build()
    s.goal_hypotheses = ()
    assert not accept(s).accepted


def test_unknown_axiom_name():
    s = ProofScript("x", (), P("p -> p"), [ProofLine(1, frozenset(), P("p -> p"), Justification("Axiom", (), "Nope"))])
    assert accept(s).diagnostics[0].kind == "UnknownJustification"


def test_boxdot_lift_wraps_hypotheses():
    b = ScriptBuilder("lift")
    h = b.hyp(Atom("p"))
    b.taut(P("p | q"), h)
    b.lift(2)
    s = b.build()
    assert s.goal_hypotheses == (P("A p"),)
    assert accept(s).accepted


def test_lemma_citation_needs_an_earlier_script():
    first = ScriptBuilder("first")
    first.taut(P("p -> p"))
    first = first.build()
    second = ScriptBuilder("second")
    second.lemma(first)
    second = second.build()
    assert not accept(second).accepted
    reports = check_bundle([first, second], registry=Registry())
    assert [r.verdict for r in reports] == ["ACCEPT", "ACCEPT"]


# ---------------------------------------------------------------- case study scripts


def test_main_scripts_accept_with_their_line_counts():
    lengths = {"protagoras": 7, "euathlus": 7, "protagoras2": 7, "euathlus2": 11,
               "no-permission-core": 9, "permitted-to-sue": 24, "judge1-core": 6}
    assert set(MAIN_SCRIPTS) >= set(lengths)
    for name, n in lengths.items():
        assert len(script(name)) == n
        reports = check_bundle(closure(name), registry=Registry())
        assert reports[-1].script == name
        assert all(r.accepted for r in reports), [str(d) for r in reports for d in r.diagnostics]


def test_protagoras_goal():
    s = script("protagoras")
    assert pretty(s.goal) == "O[verdict_p]_e pay | O[a]_e pay"


def test_euathlus_goal():
    s = script("euathlus")
    assert pretty(s.goal) == "~O[a]_e pay | ~O[verdict_e]_e pay"


def test_every_case_script_accepts():
    reports = check_bundle(case_scripts().values(), registry=Registry())
    assert all(r.accepted for r in reports)


# ---------------------------------------------------------------- derived bundles


@pytest.mark.parametrize("item", range(1, 8))
def test_lemma2_items(item):
    assert accept(derive_lemma2(item)).accepted


def test_lemma2_item_5_goal():
    assert derive_lemma2(5).goal == P("A p -> p")


def test_lemma2_item_1_goal():
    assert desugar(derive_lemma2(1).goal) == desugar(P("G p -> p & X G p"))


@pytest.mark.parametrize("item", range(1, 10))
def test_ttp_items(item):
    for m in (0, 3):
        assert accept(check_ttp_lemma(item, m, P("p & q"))).accepted


def test_ttp_item_6_on_contract_body():
    body = P("winfirst_e <-> O[a]_e pay")
    s = check_ttp_lemma(6, 10, body)
    assert accept(s).accepted
    assert s.goal == Implies(P("A (winfirst_e <-> O[a]_e pay)"), true_at(10, body))


def test_ttp_item_out_of_range():
    with pytest.raises(OutOfRange):
        check_ttp_lemma(10, 0, Atom("p"))


def test_ttp_rule_from_premise():
    premise = derive_lemma2(5)
    s = check_ttp_lemma(9, 2, Atom("p"), premise)
    assert accept(s).accepted
    assert s.goal == Implies(true_at(2, premise.goal.left), true_at(2, premise.goal.right))


def test_no_conflicts_equivalence():
    for s in no_conflicts_scripts("1", Var("x"), Atom("p")):
        assert accept(s).accepted


def test_deduction_theorem_utility():
    lib = Library()
    for name in ("protagoras", "euathlus"):
        s = script(name)
        for dep in closure(name):
            lib.put(dep)
        for h in s.goal_hypotheses:
            out = deduction(s, h, lib)
            reports = check_bundle(list(lib.values()) + [out], registry=Registry())
            assert all(r.accepted for r in reports)
            assert desugar(out.goal) == desugar(Implies(h, s.goal))


# ---------------------------------------------------------------- soundness spot check


def _theorems():
    out = [derive_lemma2(k) for k in range(1, 8)]
    out += [check_ttp_lemma(k, 2, P("p -> q")) for k in range(1, 10) if k != 8]
    out += [s for s in case_scripts().values() if not s.goal_hypotheses]
    return [s.goal for s in out]


def test_theorems_hold_in_corpus_models():
    goals = _theorems()
    assert goals
    for name in UNIVERSES:
        m = model(name)
        for g in goals:
            assert failures(m, g) == [], (name, pretty(g))


def test_theorems_hold_in_random_models():
    goals = [g for g in _theorems() if not any(c in pretty(g) for c in "[O")]
    rng = random.Random(7)
    u = Universe.closure([P("p"), P("q")])
    for _ in range(100):
        m = random_fitting_model(rng, u)
        for g in goals:
            assert failures(m, g) == []


def test_universes_cover_corpus_models():
    for name in UNIVERSES:
        assert universe(name).formulas
