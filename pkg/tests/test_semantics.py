import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jto.corpus.cases import UNIVERSES, model, universe
from jto.corpus.formulas import F
from jto.corpus.models import BUILDERS
from jto.errors import HorizonExceeded, ModelFormatError, PositionDependence, UniverseTooSmall
from jto.generate import random_fitting_model, random_formula, universe_formulas
from jto.models import FittingModel, LassoRun, NeighborhoodModel, dumps_model, loads_model, model_from_dict
from jto.parser import parse_formula as P
from jto.printer import pretty
from jto.semantics import evaluate_word, failures, mc_fitting, mc_neighborhood, model_check, truth_set
from jto.syntax import BOT, JBox, JDiamond, Not, OBox, OPermit, Time, desugar, temporal_depth
from jto.validation import Universe, fitting_to_neighborhood, validate, validate_fitting, validate_neighborhood

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def line_model(n: int = 6, true_at: int = 3) -> FittingModel:
    states = [f"s{k}" for k in range(n)]
    return model_from_dict(
        {
            "kind": "fitting",
            "agents": ["1"],
            "states": states,
            "runs": [{"stem": states[:-1], "loop": states[-1:]}],
            "relations": {"*": "identity"},
            "orelations": {"*": "identity"},
            "valuation": {states[true_at]: ["p"]},
        }
    )


def fitting(**overrides) -> FittingModel:
    data = {
        "kind": "fitting",
        "agents": ["1"],
        "states": ["w", "v"],
        "runs": [{"stem": [], "loop": ["w"]}, {"stem": [], "loop": ["v"]}],
        "relations": {"*": "identity"},
        "orelations": {"*": "identity"},
        "evidence": [],
        "nevidence": [],
        "valuation": {"w": ["p"]},
    }
    data.update(overrides)
    return model_from_dict(data)


def neighborhood(**overrides) -> NeighborhoodModel:
    data = {
        "kind": "neighborhood",
        "agents": ["1"],
        "states": ["w", "v"],
        "runs": [{"stem": [], "loop": ["w"]}, {"stem": [], "loop": ["v"]}],
        "neighborhoods": [],
        "oneighborhoods": [],
        "valuation": {"w": ["p"]},
    }
    data.update(overrides)
    return model_from_dict(data)


# ---------------------------------------------------------------- runs and temporal clauses


def test_lasso_state_function():
    r = LassoRun(("a", "b"), ("c", "d"))
    assert [r.state(n) for n in range(7)] == ["a", "b", "c", "d", "c", "d", "c"]
    with pytest.raises(ModelFormatError):
        LassoRun(("a",), ())


def test_eventually_and_sofar_on_a_line():
    m = line_model()
    assert mc_fitting(m, 0, 0, P("F p"))
    assert not mc_fitting(m, 0, 3, P("H p"))
    assert mc_fitting(m, 0, 3, P("p & H (p | ~p)"))
    assert not mc_fitting(m, 0, 4, P("p"))
    assert mc_fitting(m, 0, 4, P("Ys p"))


def test_weak_previous_at_origin():
    m = line_model()
    assert mc_fitting(m, 0, 0, P("Yw bot"))
    assert not mc_fitting(m, 0, 0, P("Ys top"))
    assert not mc_fitting(m, 0, 1, P("Yw bot"))


def test_time_literal_holds_exactly_once():
    m = line_model(12)
    for n in range(12):
        assert mc_fitting(m, 0, n, Time(4)) == (n == 4)


def test_window_beyond_the_horizon_is_refused():
    with pytest.raises(HorizonExceeded):
        mc_fitting(line_model(), 0, 0, P("F time=25000"))


def test_evaluate_word():
    holds = evaluate_word([frozenset(), frozenset({"q"})], [frozenset({"p"})], P("q & X G p"))
    assert not holds(0)
    assert holds(1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_lasso_periodicity(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 3, ("p", "q"), (), modal=False)
    states = [f"s{k}" for k in range(4)]
    p, q = rng.randint(0, 3), rng.randint(1, 3)
    m = model_from_dict(
        {
            "kind": "fitting",
            "agents": ["1"],
            "states": states,
            "runs": [{"stem": [rng.choice(states) for _ in range(p)], "loop": [rng.choice(states) for _ in range(q)]}],
            "relations": {"*": "identity"},
            "orelations": {"*": "identity"},
            "valuation": {s: sorted(a for a in "pq" if rng.random() < 0.5) for s in states},
        }
    )
    d = temporal_depth(desugar(f))
    k = q * d
    assert mc_fitting(m, 0, p + k, f) == mc_fitting(m, 0, p + k + q, f)


# ---------------------------------------------------------------- Fitting semantics


def test_knowledge_needs_evidence_and_truth():
    m = fitting(evidence=[{"agent": "1", "state": "*", "term": "x", "formula": "p"}])
    assert mc_fitting(m, 0, 0, P("[x]_1 p"))
    assert not mc_fitting(m, 0, 0, P("[y]_1 p"))
    assert not mc_fitting(m, 1, 0, P("[x]_1 p"))


def test_position_dependence_is_reported():
    m = model_from_dict(
        {
            "kind": "fitting",
            "agents": ["1"],
            "states": ["w"],
            "runs": [{"stem": [], "loop": ["w"]}],
            "relations": {"*": "identity"},
            "orelations": {"*": "identity"},
            "evidence": [{"agent": "1", "state": "*", "term": "x", "formula": "Yw bot"}],
            "valuation": {},
        }
    )
    with pytest.raises(PositionDependence):
        mc_fitting(m, 0, 0, P("[x]_1 Yw bot"))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_factivity_in_random_models(seed):
    rng = random.Random(seed)
    boxes = [f for f in universe_formulas(rng, 4) if isinstance(f, JBox)]
    u = Universe.closure(boxes or [P("[x]_1 p")])
    m = random_fitting_model(rng, u)
    for f in u.formulas:
        if isinstance(f, JBox):
            assert failures(m, P(f"{pretty(f)} -> {pretty(f.sub)}")) == []


# ---------------------------------------------------------------- neighborhood semantics


def test_bottom_is_false_at_every_visited_state():
    for name in UNIVERSES:
        m = model(name)
        assert not truth_set(m, BOT) & m.image
        if not any(BOT in formulas for formulas, _ in getattr(m, "nonnormal", {}).values()):
            assert truth_set(m, BOT) == frozenset()


def test_bottom_listed_at_a_nonnormal_state():
    assert truth_set(model("consistency"), BOT) == {"v"}


def test_jre_countermodel_truth_sets():
    m = model("jre")
    assert truth_set(m, P("p")) == {"w"}
    assert truth_set(m, P("p & p")) == {"w", "v"}
    assert mc_neighborhood(m, 0, 0, P("[x]_1 p"))
    assert not mc_neighborhood(m, 0, 0, P("[x]_1 (p & p)"))
    assert mc_neighborhood(m, 0, 0, F("jre_context"))


def test_time_ten_truth_set_in_i1():
    assert truth_set(model("i1"), Time(10)) == {"w10"}


def test_i1_assumptions_at_ten():
    m = model("i1")
    for name in ("contract", "court", "at10"):
        assert mc_neighborhood(m, 0, 10, F(name))


def test_i3_refined_assumptions_at_ten():
    m = model("i3")
    for name in ("contract2", "court2", "at10"):
        assert mc_neighborhood(m, 0, 10, F(name))


def test_i4_no_payment_at_ten():
    m = model("i4")
    assert mc_neighborhood(m, 0, 10, P("true_10(~pay)"))
    assert mc_neighborhood(m, 0, 10, F("court2"))


def test_i2_euathlus_never_wins_first():
    assert not model_check(model("i2"), 0, 0, F("winfirst_ever"))


@pytest.mark.parametrize("name", list(UNIVERSES))
def test_duality_at_every_point(name):
    m = model(name)
    for f in universe(name).formulas:
        if not isinstance(f, (JBox, OBox)) or f.agent not in m.agents:
            continue
        body = f.sub
        dual_cls = JDiamond if isinstance(f, JBox) else OPermit
        dual = dual_cls(f.agent, f.term, body)
        box_neg = type(f)(f.agent, f.term, Not(body))
        for run in range(len(m.runs)):
            for n in (0, 5, 10):
                assert model_check(m, run, n, dual) == (not model_check(m, run, n, box_neg))


# ---------------------------------------------------------------- validation


@pytest.mark.parametrize("name", list(UNIVERSES))
def test_corpus_models_validate(name):
    report = validate(model(name), universe(name))
    assert report.ok, [str(v) for v in report.violations]


def test_shift_reflexivity_violation():
    m = fitting(orelations={"1": [["w", "v"]]})
    kinds = {v.kind for v in validate_fitting(m, Universe.closure([P("p")])).violations}
    assert "shift-reflexivity" in kinds


def test_reflexivity_and_transitivity_violations():
    m = fitting(relations={"1": [["w", "v"], ["v", "w"]]})
    kinds = {v.kind for v in validate_fitting(m, Universe.closure([P("p")])).violations}
    assert {"reflexivity", "transitivity"} <= kinds


def test_deontic_consistency_violation():
    base = BUILDERS["i1-fitting"]()
    base["nevidence"] = [
        {"agent": "*", "state": ["w10"], "term": "a", "formula": "pay"},
        {"agent": "*", "state": ["w10"], "term": "a", "formula": "~pay"},
    ] + base["nevidence"]
    m = model_from_dict(base)
    u = Universe.closure([F(n) for n in UNIVERSES["i1-fitting"]] + [P("O[a]_e ~pay")])
    kinds = {v.kind for v in validate_fitting(m, u).violations}
    assert "consistency" in kinds


def test_monotonicity_violation():
    m = fitting(
        relations={"1": [["w", "w"], ["v", "v"], ["w", "v"]]},
        evidence=[{"agent": "1", "state": ["w"], "term": "x", "formula": "p"}],
    )
    kinds = {v.kind for v in validate_fitting(m, Universe.closure([P("[x]_1 p")])).violations}
    assert "monotonicity" in kinds


def test_reflexivity_n_violation():
    m = neighborhood(neighborhoods=[{"agent": "1", "state": ["v"], "term": "x", "family": [["w"]]}])
    kinds = {v.kind for v in validate_neighborhood(m, Universe.closure([P("[x]_1 p")])).violations}
    assert "reflexivity-N" in kinds


def test_noc_violation():
    m = neighborhood(oneighborhoods=[{"agent": "1", "state": "*", "term": "x", "family": [["w"], ["v"]]}])
    kinds = {v.kind for v in validate_neighborhood(m, Universe.closure([P("O[x]_1 p"), P("O[x]_1 ~p")])).violations}
    assert "noc-NO" in kinds


def test_report_names_the_universe():
    report = validate(model("jre"), universe("jre"))
    assert "jre universe" in report.universe


# ---------------------------------------------------------------- models on disk


@pytest.mark.parametrize("name", list(BUILDERS))
def test_model_file_round_trip(name):
    m = model(name)
    again = loads_model(dumps_model(m))
    assert dumps_model(again) == dumps_model(m)


def test_model_format_errors():
    with pytest.raises(ModelFormatError):
        loads_model("kind: fitting\n")
    with pytest.raises(ModelFormatError):
        loads_model("jtom 1\nkind: fitting\nstates: [a]\nruns: [{stem: [], loop: [b]}]\n")
    with pytest.raises(ModelFormatError):
        loads_model("jtom 1\n[1, 2")


# ---------------------------------------------------------------- Fitting to neighborhood


@pytest.mark.parametrize("name", ["i1-fitting", "i3-fitting"])
def test_transform_of_corpus_models(name):
    m = model(name)
    u = universe(name)
    nm = fitting_to_neighborhood(m, u)
    for f in u.formulas:
        for n in range(0, 18):
            assert mc_fitting(m, 0, n, f) == mc_neighborhood(nm, 0, n, f), (pretty(f), n)


def test_transform_of_empty_evidence_has_empty_families():
    m = fitting()
    nm = fitting_to_neighborhood(m, Universe.closure([P("[x]_1 p"), P("O[y]_1 p")]))
    assert not nm.neighborhoods.rules
    assert not nm.oneighborhoods.rules


def test_transform_keeps_true_assertions():
    m = fitting(evidence=[{"agent": "1", "state": "*", "term": "x", "formula": "p"}])
    f = P("[x]_1 p")
    nm = fitting_to_neighborhood(m, [f])
    assert mc_fitting(m, 0, 0, f) and mc_neighborhood(nm, 0, 0, f)


def test_transform_needs_bodies_in_the_universe():
    u = Universe(frozenset(), frozenset({desugar(P("[x]_1 p"))}))
    with pytest.raises(UniverseTooSmall):
        fitting_to_neighborhood(fitting(), u)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_transform_agrees_on_random_models(seed):
    rng = random.Random(seed)
    u = Universe.closure(universe_formulas(rng, 4))
    m = random_fitting_model(rng, u)
    nm = fitting_to_neighborhood(m, u)
    for f in u.formulas:
        assert failures(m, f) == failures(nm, f)
