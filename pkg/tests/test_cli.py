import pytest

from artifact.cli import main
from artifact.syntax import parse_goal

from conftest import P41, P41_QA, P45, SUM


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in (("p41", P41), ("qa", P41_QA), ("sum", SUM), ("p45", P45)):
        f = tmp_path / f"{name}.pl"
        f.write_text(text)
        out[name] = str(f)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_exit_codes(files, capsys):
    code, out, _ = run(capsys, "run", files["qa"], "p(X1,X2)")
    assert code == 0 and "f(a)" in out
    code, out, _ = run(capsys, "run", files["p41"], "p(X1,X2)")
    assert code == 1
    code, _, err = run(capsys, "run", files["qa"], "p(X1,")
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "run", files["qa"], "p(X)", "--depth-derivation", "0")
    assert code == 2


def test_run_lines_round_trip(files, capsys):
    code, out, _ = run(capsys, "run", files["sum"], "sum(s(0),s(0),Z)", "--format", "lines")
    assert code == 0
    answers = [l[len("answer "):] for l in out.splitlines() if l.startswith("answer ")]
    assert "complete true" in out.splitlines()
    (g,) = [parse_goal(a) for a in answers]
    assert str(g.atoms[0]).replace(" ", "") == "sum(s(0),s(0),s(s(0)))"


def test_compare_random(files, capsys):
    code, out, _ = run(capsys, "compare", files["sum"], "--random", "20", "--seed", "5")
    assert code == 0 and out.splitlines()[-1] == "PASS 20/20"
    code, _, _ = run(capsys, "compare", files["sum"])
    assert code == 2


def test_equiv(files, capsys):
    code, out, _ = run(capsys, "equiv", files["p45"], "p(X)", "q(X)", "--rel", "3")
    assert code == 3 and "separated" in out and "[a/X]" in out
    code, out, _ = run(capsys, "equiv", files["p45"], "p(X)", "q(X)", "--rel", "trace",
                       "--format", "lines")
    assert code == 3 and "verdict separated" in out and "witness ?- p(a)." in out
    code, out, _ = run(capsys, "equiv", files["p45"], "p(X)", "p(X)", "--rel", "3")
    assert code in (0, 1)


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "--trials", "30", "--seed", "42")
    assert code == 0 and out.startswith("PASS")


def test_pullback(capsys):
    code, out, _ = run(capsys, "pullback", "x1, x1", "a, a")
    assert code == 0 and out.startswith("border") and "proof" in out
    code, out, _ = run(capsys, "pullback", "x1, x1", "b, a")
    assert code == 1 and out.strip() == "no pullback"


def test_semantics(files, capsys):
    code, out, _ = run(capsys, "semantics", files["sum"], "--op", "1", "--depth-term", "2")
    assert code == 0 and "sum(0,0,0)" in out.replace(" ", "")
    code, out, _ = run(capsys, "semantics", files["sum"], "--op", "3", "--pred", "sum")
    assert code == 0 and out.startswith("{")
    code, _, _ = run(capsys, "semantics", files["sum"], "--op", "4")
    assert code == 2


def test_causality_and_trace(files, capsys):
    code, out, _ = run(capsys, "causality", files["qa"], "p(X1,X2)")
    assert code == 0 and "c1 @ 0" in out and out.count("  ok ") == 2
    code, out, _ = run(capsys, "causality", files["p41"], "p(X1,X2)")
    assert code == 1 and out.strip() == "no."
    code, out, _ = run(capsys, "trace", files["qa"], "p(X1,X2)")
    assert code == 0 and "refutation sld 1" in out and "refutation tile 1" in out
