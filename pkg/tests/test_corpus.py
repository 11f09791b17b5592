from importlib import resources
from pathlib import Path

import pytest

from jto.corpus.cases import asset_files, case_names, export, get_case, load_corpus, model, run_case, write_assets
from jto.corpus.formulas import F
from jto.corpus.scripts import script
from jto.errors import UnknownCase
from jto.parser import parse_formula as P
from jto.search import SearchBounds, bounded_sat
from jto.semantics import mc_neighborhood, model_check
from jto.syntax import conj, forgetful_projection

GOLDEN = Path(__file__).parent / "golden" / "corpus-machine.txt"
CASES = ["arguments-v1", "sdl-projection", "refined-v2", "permission-to-sue", "judge", "non-validity"]


def test_case_names():
    assert case_names() == CASES
    assert all(c.expectations for c in load_corpus())


def test_unknown_case():
    with pytest.raises(UnknownCase):
        run_case("nosuchcase")
    with pytest.raises(KeyError):
        get_case("nosuchcase")


@pytest.mark.parametrize("name", CASES)
def test_every_expectation_passes(name):
    report = run_case(name)
    assert report.ok, report.text()


def test_arguments_summary():
    report = run_case("arguments-v1")
    assert report.summary() == "6/6 expectations pass"
    assert [r.engine for r in report.results[:3]] == ["check_proof", "check_proof", "validate_neighborhood"]


def test_sdl_projection_contrast():
    report = run_case("sdl-projection")
    verdicts = [r.actual for r in report.results]
    assert verdicts == ["ACCEPT", "UNSAT", "SAT", "ACCEPT", "UNSAT", "SAT"]


def test_machine_output_is_pinned():
    lines = []
    for name in CASES:
        lines.append(run_case(name).machine())
    assert "\n".join(lines) + "\n" == GOLDEN.read_text(encoding="utf-8")


def test_refined_case_notes_the_informative_contract():
    assert any("contract3_1" in n for n in get_case("refined-v2").notes)


# ---------------------------------------------------------------- assets


def test_shipped_assets_match_the_builders():
    base = resources.files("jto.corpus").joinpath("assets")
    for rel, text in asset_files().items():
        node = base
        for part in rel.split("/"):
            node = node.joinpath(part)
        assert node.read_text(encoding="utf-8") == text, rel


def test_export_copies_every_asset(tmp_path):
    written = export(tmp_path)
    rel = {p.relative_to(tmp_path).as_posix() for p in written}
    assert rel == set(asset_files())
    assert all(p.resolve().is_relative_to(tmp_path.resolve()) for p in written)


def test_write_assets(tmp_path):
    written = write_assets(tmp_path)
    assert len(written) == len(asset_files())


# ---------------------------------------------------------------- the case study


def test_i1_timeline():
    m = model("i1")
    assert [s for s in m.states if "winfirst_e" in m.valuation.get(s, ())] == ["w10"]
    assert m.runs[0].p == 16 and m.runs[0].q == 1


def test_i2_is_one_empty_state():
    m = model("i2")
    assert m.states == ("w",)
    assert not any(m.valuation.values())


def test_judge_goal():
    assert script("judge1").goal == P("true_10(~win_p & winfirst_e & O[a]_e pay)")


def test_arguments_are_jointly_satisfiable():
    m = model("i1")
    goals = [script("protagoras").goal, script("euathlus").goal]
    assert mc_neighborhood(m, 0, 10, conj(F("contract"), F("court"), F("at10"), *goals))


def test_projection_flips_the_verdict():
    gamma = [F("contract"), F("court")]
    bounds = SearchBounds(12, 2)
    assert bounded_sat(gamma, 10, bounds).sat
    assert not bounded_sat([forgetful_projection(f) for f in gamma], 10, bounds).sat


def test_countermodel_verdicts():
    assert not model_check(model("jre"), 0, 0, F("jre"))
    assert not model_check(model("jre-o"), 0, 0, F("jre_o"))
    assert not model_check(model("consistency"), 0, 0, F("consistency"))
    assert model_check(model("strong-no-conflicts"), 0, 0, F("conflict"))
    assert not model_check(model("strong-no-conflicts"), 0, 0, F("weak_no_conflicts"))
