import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jto.corpus.cases import model
from jto.corpus.formulas import F
from jto.errors import BoundsTooLarge, NotUnsat
from jto.generate import random_fitting_model, random_formula
from jto.parser import parse_formula as P
from jto.sat import Solver
from jto.search import SearchBounds, abstract, bounded_sat, explain_unsat, witness_model
from jto.semantics import mc_fitting, model_check
from jto.syntax import Atom, Time, desugar, forgetful_projection
from jto.validation import Universe

seeds = st.integers(min_value=0, max_value=2**32 - 1)
SMALL = SearchBounds(3, 2)


# ---------------------------------------------------------------- solver


def test_solver_finds_a_model():
    s = Solver()
    a, b, c = s.new_var(), s.new_var(), s.new_var()
    s.add([a, b])
    s.add([-a, c])
    s.add([-b, c])
    s.add([-c, -a])
    model = s.solve()
    assert model is not None
    assert model[c] and model[b] and not model[a]


def test_solver_refutes_and_respects_assumptions():
    s = Solver()
    a, b = s.new_var(), s.new_var()
    s.add([a, b])
    s.add([-a, b])
    assert s.solve([-b]) is None
    assert s.solve([b]) is not None


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_solver_agrees_with_truth_tables(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    clauses = [[rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, 3))] for _ in range(rng.randint(1, 12))]
    s = Solver()
    for _ in range(n):
        s.new_var()
    for c in clauses:
        s.add(list(c))
    model = s.solve()

    def holds(bits):
        return all(any((lit > 0) == bits[abs(lit)] for lit in c) for c in clauses)

    brute = any(holds({k + 1: bool(mask >> k & 1) for k in range(n)}) for mask in range(2**n))
    assert (model is not None) == brute
    if model is not None:
        assert holds(model)


# ---------------------------------------------------------------- abstraction


def test_one_atom_per_assertion():
    ab = abstract([P("O[a]_e pay"), P("~O[a]_e pay")])
    assert list(ab.atom_map) == [desugar(P("O[a]_e pay"))]
    assert ab.side_constraints == ()


def test_projection_maps_each_obligation_to_one_atom():
    gamma = [forgetful_projection(F(n)) for n in ("contract", "court")]
    ab = abstract(gamma)
    bodies = {(f.agent, f.sub) for f in ab.atom_map}
    assert len(bodies) == len(ab.atom_map)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_atom_map_round_trip(seed):
    rng = random.Random(seed)
    fs = [random_formula(rng, 3) for _ in range(rng.randint(1, 3))]
    ab = abstract(fs)
    assert [ab.concretize(g) for g in ab.formulas[: len(fs)]] == [desugar(f) for f in fs]
    assert len(set(ab.atom_map.values())) == len(ab.atom_map)
    atoms = set(ab.atom_map.values())
    for c in ab.side_constraints:
        assert not any(isinstance(x, Atom) and x.name.startswith("_m") and x.name not in atoms for x in _atoms(c))


def _atoms(f):
    from jto.syntax import subformulas

    return [g for g in subformulas(f) if isinstance(g, Atom)]


# ---------------------------------------------------------------- verdicts


def test_propositional_clash_is_unsat():
    v = bounded_sat([P("p"), P("~p")], b=SMALL)
    assert not v.sat
    assert str(v) == "UNSAT max_stem=3 max_loop=2"


def test_eventually_is_sat_with_q_in_the_loop():
    v = bounded_sat([P("F q")], b=SMALL)
    assert v.sat
    assert str(v) == "SAT stem=[] loop=[0] labels={0:{q}}"
    m = witness_model(v)
    assert mc_fitting(m, 0, 0, P("F q"))


def test_projected_assumptions_are_unsat_at_ten():
    gamma = [forgetful_projection(F(n)) for n in ("contract", "court")]
    assert not bounded_sat(gamma, 10, SearchBounds(12, 2)).sat


def test_justified_assumptions_are_sat_at_ten():
    v = bounded_sat([F("contract"), F("court")], 10, SearchBounds(12, 2))
    assert v.sat
    assert v.position == 10


def test_factivity_constraint_is_used():
    assert not bounded_sat([P("[x]_1 p"), P("~p")], b=SMALL).sat
    assert bounded_sat([P("O[x]_1 p"), P("~p")], b=SMALL).sat


def test_no_conflicts_constraint_is_used():
    assert not bounded_sat([P("O[x]_1 p"), P("O[x]_1 ~p")], b=SMALL).sat
    assert bounded_sat([P("O[x]_1 p"), P("O[y]_1 ~p")], b=SMALL).sat


def test_budget():
    big = [P(f"G F a{k}") for k in range(60)]
    with pytest.raises(BoundsTooLarge):
        bounded_sat(big, b=SearchBounds(2000, 100))


def test_bounds_need_a_loop():
    with pytest.raises(ValueError):
        SearchBounds(3, 0)


def test_shapes_order():
    assert SearchBounds(1, 2).shapes() == [(0, 1), (0, 2), (1, 1), (1, 2)]


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_determinism(seed):
    rng = random.Random(seed)
    fs = [random_formula(rng, 3, ("p", "q"), ("1",)) for _ in range(2)]
    a, b = bounded_sat(fs, b=SMALL), bounded_sat(fs, b=SMALL)
    assert str(a) == str(b)
    assert (a.stem, a.loop) == (b.stem, b.loop)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_witnesses_of_justification_free_input_lift(seed):
    rng = random.Random(seed)
    fs = [random_formula(rng, 3, ("p", "q"), (), modal=False) for _ in range(2)]
    v = bounded_sat(fs, b=SMALL)
    if v.sat:
        m = witness_model(v)
        for f in fs:
            assert mc_fitting(m, 0, v.position, f)


# ---------------------------------------------------------------- over-approximation


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_true_somewhere_means_sat(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 3, ("p", "q"), (), modal=False)
    m = random_fitting_model(rng, Universe.closure([Atom("p")]), max_states=3, max_runs=1)
    run = m.runs[0]
    bounds = SearchBounds(max(run.p, 1), max(run.q, 2))
    for n in range(run.p + run.q):
        if mc_fitting(m, 0, n, f):
            assert bounded_sat([f], n, bounds).sat
            break


@pytest.mark.parametrize(
    "name,formulas,position",
    [
        ("i1", ("contract", "court"), 10),
        ("i1-fitting", ("contract", "court"), 10),
        ("i3", ("contract2", "court2"), 10),
        ("i4", ("contract2", "court2", "nopay10"), 10),
        ("i2", ("contract2",), 0),
        ("strong-no-conflicts", ("conflict",), 0),
        ("consistency", (), 0),
    ],
)
def test_corpus_points_are_never_refuted(name, formulas, position):
    m = model(name)
    fs = [F(n) for n in formulas] or [P("O[x]_1 bot")]
    assert all(model_check(m, 0, position, f) for f in fs)
    assert bounded_sat(fs, position, SearchBounds(16, 1)).sat


# ---------------------------------------------------------------- explanations


def test_explain_projection_clash():
    gamma = [forgetful_projection(F(n)) for n in ("contract", "court")]
    report = explain_unsat(gamma, SearchBounds(12, 2), 10)
    assert report.get("clash") == "atom O_e pay at position 10"


def test_explain_propositional_clash():
    report = explain_unsat([P("p & ~p")], SMALL)
    assert report.get("clash") == "atom p at position 0"


def test_explain_requires_unsat():
    with pytest.raises(NotUnsat):
        explain_unsat([P("F q")], SMALL)


def test_time_literal_positions():
    v = bounded_sat([Time(3)], b=SearchBounds(4, 1))
    assert not v.sat
    v = bounded_sat([P("F time=3")], b=SearchBounds(4, 1))
    assert v.sat
    assert mc_fitting(witness_model(v), 0, 0, P("F time=3"))
