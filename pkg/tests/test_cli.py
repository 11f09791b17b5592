import io
from pathlib import Path

import pytest

from jto.cli import main
from jto.corpus.cases import export


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def corpus(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("corpus")
    export(root)
    return root


def test_parse():
    code, out, _ = run("parse", "-e", "[t]_1 p -> p")
    assert code == 0
    assert "formula: [t]_1 p -> p" in out
    assert "JBox(agent='1', term=t)" in out


def test_parse_machine():
    code, out, _ = run("--format", "machine", "parse", "-e", "P[x]_1 p")
    assert code == 0
    assert out.splitlines() == ["formula\tP[x]_1 p\tP[x]_1 p", "core\tP[x]_1 p\tO[x]_1 (p -> bot) -> bot"]


def test_sort_error_is_a_usage_error():
    code, out, err = run("parse", "-e", "O[!x]_1 p")
    assert code == 2
    assert "SortError" in err
    assert out == ""


def test_syntax_error():
    code, _, err = run("parse", "-e", "p &")
    assert code == 2
    assert "column" in err


def test_missing_arguments():
    assert run()[0] == 2
    assert run("model-check")[0] == 2


def test_check_proof(corpus):
    code, out, _ = run("check-proof", str(corpus / "scripts" / "protagoras.jtopf"))
    assert code == 0
    assert out.startswith("protagoras: ACCEPT (7 lines)")


def test_check_proof_with_requirements(corpus):
    code, out, _ = run("--format", "machine", "check-proof", str(corpus / "scripts" / "judge2.jtopf"))
    assert code == 0
    assert out.splitlines()[-1] == "proof\tjudge2\tACCEPT"


def test_rejected_proof(corpus, tmp_path):
    for dep in (corpus / "scripts").iterdir():
        (tmp_path / dep.name).write_text(dep.read_text(encoding="utf-8"), encoding="utf-8")
    target = tmp_path / "protagoras.jtopf"
    text = target.read_text(encoding="utf-8")
    bad = text.replace("| Hyp\n", "| Taut\n", 1)
    assert bad != text
    target.write_text(bad, encoding="utf-8")
    code, out, _ = run("check-proof", str(target))
    assert code == 1
    assert "REJECT" in out


def test_malformed_proof(tmp_path):
    (tmp_path / "x.jtopf").write_text("not a script\n", encoding="utf-8")
    assert run("check-proof", str(tmp_path / "x.jtopf"))[0] == 2


def test_missing_file():
    assert run("check-proof", "/nonexistent/x.jtopf")[0] == 2


def test_validate_model(corpus):
    code, out, _ = run("validate-model", str(corpus / "models" / "i4.jtom"), "--universe", str(corpus / "universes" / "i4.jto"))
    assert code == 0
    assert out.startswith("i4: VALID")


def test_validate_model_with_violations(corpus, tmp_path):
    text = (corpus / "models" / "jre.jtom").read_text(encoding="utf-8")
    # the empty set is the truth set of bot, which misses w
    bad = text.replace("family: [[w]]}", "family: [[], [w]]}", 1)
    assert bad != text
    (tmp_path / "bad.jtom").write_text(bad, encoding="utf-8")
    code, out, _ = run("--format", "machine", "validate-model", str(tmp_path / "bad.jtom"), "--universe", str(corpus / "universes" / "jre.jto"))
    assert code == 1
    assert out.splitlines()[0] == "validate\tjre\tINVALID"
    assert any(line.startswith("violation\treflexivity-N") for line in out.splitlines())


def test_model_check(corpus):
    code, out, _ = run("model-check", str(corpus / "models" / "i2.jtom"), "-e", "F winfirst_e", "--run", "0", "--pos", "0")
    assert (code, out) == (1, "false\n")
    code, out, _ = run("model-check", str(corpus / "models" / "i1.jtom"), "-e", "time=10 & winfirst_e", "--pos", "10")
    assert (code, out) == (0, "true\n")


def test_model_check_through_the_transform(corpus):
    path = str(corpus / "models" / "i1-fitting.jtom")
    for semantics in ("fitting", "neighborhood"):
        code, out, _ = run("model-check", path, "-e", "O[a]_e pay", "--pos", "10", "--semantics", semantics)
        assert (code, out) == (0, "true\n")


def test_model_check_bad_point(corpus):
    path = str(corpus / "models" / "i2.jtom")
    assert run("model-check", path, "-e", "p", "--run", "3")[0] == 2
    assert run("model-check", path, "-e", "p", "--semantics", "fitting")[0] == 2


def test_far_positions_fold_onto_the_loop(corpus):
    code, out, _ = run("model-check", str(corpus / "models" / "i1.jtom"), "-e", "G pay", "--pos", "100000")
    assert (code, out) == (0, "true\n")


def test_deep_time_literal_is_evaluated(corpus):
    code, out, _ = run("model-check", str(corpus / "models" / "i1.jtom"), "-e", "P- time=2000", "--pos", "2000")
    assert (code, out) == (0, "true\n")


def test_model_check_horizon_is_a_budget_error(corpus):
    code, _, err = run("model-check", str(corpus / "models" / "i2.jtom"), "-e", "F time=25000")
    assert code == 3
    assert "budget exceeded: evaluation window" in err


def test_search(corpus, tmp_path):
    f = tmp_path / "gamma.jto"
    f.write_text("O_e pay\n~O_e pay\n", encoding="utf-8")
    code, out, _ = run("search", "-f", str(f), "--max-stem", "2", "--max-loop", "1", "--explain")
    assert code == 1
    assert out.splitlines()[0] == "UNSAT max_stem=2 max_loop=1"
    assert "clash: atom O_e pay at position 0" in out


def test_search_sat(tmp_path):
    f = tmp_path / "fq.jto"
    f.write_text("F q\n", encoding="utf-8")
    code, out, _ = run("--format", "machine", "search", "-f", str(f))
    assert code == 0
    assert out == f"search\t{f}\tSAT stem=[] loop=[0] labels={{0:{{q}}}}\n"


def test_search_budget(tmp_path):
    f = tmp_path / "big.jto"
    f.write_text("".join(f"G F a{k}\n" for k in range(60)), encoding="utf-8")
    assert run("search", "-f", str(f), "--max-stem", "2000", "--max-loop", "100")[0] == 3


def test_search_projection_at_ten(corpus):
    code, out, _ = run("search", "-f", str(corpus / "universes" / "i1.jto"), "--at", "10", "--max-stem", "12")
    assert code == 0
    assert out.startswith("SAT")


def test_corpus_run():
    code, out, _ = run("corpus", "run", "arguments-v1")
    assert code == 0
    assert out.rstrip().endswith("6/6 expectations pass")


def test_corpus_unknown_case():
    code, _, err = run("corpus", "run", "nosuch")
    assert code == 2
    assert "no corpus case named 'nosuch'" in err


def test_corpus_list_machine():
    code, out, _ = run("corpus", "list", "--format", "machine")
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()] == [
        "arguments-v1", "sdl-projection", "refined-v2", "permission-to-sue", "judge", "non-validity",
    ]


def test_corpus_export(tmp_path):
    code, out, _ = run("corpus", "export", str(tmp_path / "out"))
    assert code == 0
    assert (tmp_path / "out" / "models" / "i1.jtom").exists()
    assert (tmp_path / "out" / "protagoras.jto").exists()
    assert run("corpus", "export")[0] == 2


def test_version():
    assert run("--version")[0] == 0
