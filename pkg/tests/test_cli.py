import json

import pytest

from diffchain.automata import decide, format_automaton, parse_automaton, to_dfa
from diffchain.cli import main
from diffchain.logic import compile_sentence

from corpus import ABC, bstar, parity_dfa, sentence

BSTAR_TEXT = "alphabet: a b\nstates: 2\ninitial: 0\naccepting: 0\n0 b -> 0\n"
A_NO_B_TEXT = "alphabet: a b c\n(exists x. a(x)) and (forall x. not b(x))\n"
DIV_TEXT = "alphabet: a b c\nforall x. forall y. (a(x) and b(y)) => div(x, y)\n"
TABLE_TEXT = "arity: 3\n101\n010\n111\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [
        ("bstar.aut", BSTAR_TEXT),
        ("a_no_b.fo", A_NO_B_TEXT),
        ("div.fo", DIV_TEXT),
        ("table.tt", TABLE_TEXT),
    ]:
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_ceiling_command(files, capsys):
    code = main(["ceiling", files["bstar.aut"], "--vars", "1"])
    out = capsys.readouterr().out
    assert code == 0
    result = to_dfa(parse_automaton(out))
    assert decide("equiv", result, bstar()) == (True, None)


def test_ceiling_writes_dot(files):
    out = files["dir"] / "ceil.aut"
    dot = files["dir"] / "ceil.dot"
    code = main(["ceiling", files["bstar.aut"], "--vars", "1", "--out", str(out), "--dot", str(dot)])
    assert code == 0
    assert dot.read_text().startswith("digraph")


def test_decompose_command_success_and_failure(files, capsys):
    aut = files["dir"] / "a_no_b.aut"
    assert main(["compile", files["a_no_b.fo"], "--out", str(aut)]) == 0

    report = files["dir"] / "report.json"
    code = main(["decompose", str(aut), "--vars", "1", "--terms", "2", "--json", str(report)])
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["verdict"] == "success"
    assert payload["d"] == 1 and payload["k"] == 2
    assert len(payload["chain"]) == 2
    # embedded automata re-parse to the same languages
    lang = compile_sentence(sentence(A_NO_B_TEXT.splitlines()[1], ABC))
    chain = [to_dfa(parse_automaton(text)) for text in payload["chain"]]
    from diffchain.decompose import verify

    assert verify(chain, lang)
    assert payload["skeleton"] is not None
    capsys.readouterr()

    code = main(["decompose", str(aut), "--vars", "1", "--terms", "1", "--json", str(report)])
    assert code == 1
    payload = json.loads(report.read_text())
    assert payload["verdict"] == "failure"
    assert payload["residual"]
    assert payload["witness"] == ""
    assert payload["skeleton"] is None


def test_search_command(files, capsys):
    aut = files["dir"] / "a_no_b.aut"
    main(["compile", files["a_no_b.fo"], "--out", str(aut)])
    capsys.readouterr()
    code = main(["search", str(aut), "--max-vars", "2", "--max-terms", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "found: d=1 k=2"


def test_search_exhausted_exit(files, tmp_path, capsys):
    p = tmp_path / "parity.aut"
    p.write_text(format_automaton(parity_dfa()))
    code = main(["search", str(p), "--max-vars", "1", "--max-terms", "2"])
    out = capsys.readouterr().out
    assert code == 1
    assert out.splitlines()[0] == "exhausted"


def test_hausdorff_command(files, capsys):
    code = main(["hausdorff", files["table.tt"]])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "link 1: 010 011 101 110 111"
    assert out[1] == "  dnf: p2 or (p1 and p3)"
    assert out[4] == "link 3: 111"


def test_eval_command_exit_codes(files, capsys):
    assert main(["eval", files["div.fo"], "aacbcbcc"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert main(["eval", files["div.fo"], "aacbbbcc"]) == 1
    assert capsys.readouterr().out.strip() == "false"


def test_compile_rejects_nonregular(files, capsys):
    assert main(["compile", files["div.fo"]]) == 2
    assert "non-regular atom" in capsys.readouterr().err


def test_equiv_command(files, tmp_path, capsys):
    # compiled sentence against hand automaton for b*... they differ
    other = tmp_path / "allwords.aut"
    other.write_text("alphabet: a b\nstates: 1\ninitial: 0\naccepting: 0\n0 a -> 0\n0 b -> 0\n")
    code = main(["equiv", files["bstar.aut"], str(other)])
    out = capsys.readouterr().out
    assert code == 1
    assert "witness: 'a'" in out
    code = main(["equiv", files["bstar.aut"], files["bstar.aut"]])
    assert code == 0
    assert capsys.readouterr().out.strip() == "equivalent"


def test_equiv_mixes_sentences_and_automata(files, tmp_path, capsys):
    compiled = tmp_path / "compiled.aut"
    main(["compile", files["a_no_b.fo"], "--out", str(compiled)])
    capsys.readouterr()
    assert main(["equiv", files["a_no_b.fo"], str(compiled)]) == 0


def test_dot_command(files, capsys):
    assert main(["dot", files["bstar.aut"]]) == 0
    assert capsys.readouterr().out.startswith("digraph")


def test_input_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.aut"
    bad.write_text("alphabet: a b\nstates: nope\ninitial: 0\naccepting:\n")
    assert main(["ceiling", str(bad), "--vars", "1"]) == 2
    assert main(["ceiling", str(tmp_path / "missing.aut"), "--vars", "1"]) == 2


def test_resource_limit_exit(tmp_path, capsys):
    # nondeterministic "18th symbol from the end is a": determinization
    # needs more subsets than the default cap allows
    k = 18
    lines = ["alphabet: a b", f"states: {k + 1}", "initial: 0", f"accepting: {k}"]
    lines += ["0 a -> 0", "0 b -> 0", "0 a -> 1"]
    for i in range(1, k):
        lines += [f"{i} a -> {i + 1}", f"{i} b -> {i + 1}"]
    big = tmp_path / "big.aut"
    big.write_text("\n".join(lines) + "\n")
    assert main(["ceiling", str(big), "--vars", "1"]) == 3
    assert "resource limit" in capsys.readouterr().err


def test_outputs_are_deterministic(files, capsys):
    runs = []
    for _ in range(2):
        main(["ceiling", files["bstar.aut"], "--vars", "1"])
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]
