import pytest

from jto.corpus.scripts import case_scripts
from jto.errors import ParseError
from jto.kernel import EMPTY_CS, Justification, Registry, check_proof
from jto.parser import parse_formula as P
from jto.proofs import derive_lemma2
from jto.scriptio import dumps_script, load_cs, loads_script, parse_justification, resolve_cs, save_script

SCRIPT = """jtopf 1
name: small
cs: empty
# disjunction introduction
hyp 1: p
goal: {1} |- p | q
---
# the hypothesis
1 | {1} | p | Hyp
2 | {1} | p | q | Taut(1)
"""


def test_load_small_script():
    s = loads_script(SCRIPT)
    assert s.name == "small"
    assert s.goal == P("p | q")
    assert s.goal_hypotheses == (P("p"),)
    assert [line.justification for line in s.lines] == [Justification("Hyp"), Justification("Taut", (1,))]
    assert s.lines[0].comment == "the hypothesis"
    assert s.lines[1].formula == P("p | q")
    assert check_proof(s, EMPTY_CS, Registry()).accepted


def test_dump_is_stable():
    s = loads_script(SCRIPT)
    assert dumps_script(loads_script(dumps_script(s))) == dumps_script(s)


def test_case_scripts_round_trip():
    for s in case_scripts().values():
        again = loads_script(dumps_script(s))
        assert again.goal == s.goal
        assert again.goal_hypotheses == s.goal_hypotheses
        assert again.requires == s.requires
        assert [(l.index, l.hypotheses, l.formula, l.justification) for l in again.lines] == [
            (l.index, l.hypotheses, l.formula, l.justification) for l in s.lines
        ]


def test_justifications():
    assert parse_justification("Axiom(Factivity)") == Justification("Axiom", (), "Factivity")
    assert parse_justification("Lemma(court-win, 2, 3)") == Justification("Lemma", (2, 3), "court-win")
    assert parse_justification("MP(1, 2)") == Justification("MP", (1, 2))
    with pytest.raises(ParseError):
        parse_justification("Magic(1)")
    with pytest.raises(ParseError):
        parse_justification("MP(a)")


@pytest.mark.parametrize(
    "text",
    [
        "name: x\n",
        "jtopf 1\nname: x\ngoal: {} |- p\n",
        "jtopf 1\nname: x\ngoal: {} p\n---\n",
        "jtopf 1\nname: x\nhyp 1: p\ngoal: {2} |- p\n---\n",
        "jtopf 1\nname: x\ngoal: {} |- p\n---\n1 | {} | p\n",
        "jtopf 1\nname: x\ngoal: {} |- p\n---\n1 | {} | p & | Taut\n",
        "jtopf 1\nname: x\ncolour: red\ngoal: {} |- p\n---\n",
    ],
)
def test_malformed_scripts(text):
    with pytest.raises(ParseError):
        loads_script(text)


def test_formula_error_reports_the_file_line():
    with pytest.raises(ParseError) as err:
        loads_script("jtopf 1\nname: x\ngoal: {} |- p\n---\n1 | {} | p & | Taut\n")
    assert err.value.line == 5


def test_save_and_constant_specification(tmp_path):
    (tmp_path / "cs.jto").write_text("[$c]_1 (p -> p)\n", encoding="utf-8")
    s = derive_lemma2(5)
    s.cs = "cs.jto"
    save_script(s, tmp_path / "l5.jtopf")
    loaded = loads_script((tmp_path / "l5.jtopf").read_text(encoding="utf-8"))
    cs = resolve_cs(loaded, tmp_path)
    assert P("[$c]_1 (p -> p)") in cs
    assert load_cs(tmp_path / "cs.jto").entries == cs.entries
    loaded.cs = "empty"
    assert not resolve_cs(loaded, tmp_path).entries
