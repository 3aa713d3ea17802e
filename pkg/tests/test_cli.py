"""Command line interface: inputs, subcommands, exit codes."""

import json

import pytest

from zpoly.cli import main

SIGNED_ZEXPR = """alphabet = a
ind(a(aa)*) . ind(a(aa)*) + ind((aa)*) . ind((aa)*)
 - ind((aa)*) . ind(a(aa)*) - ind(a(aa)*) . ind((aa)*)
 + ind(a(aa)*) - ind((aa)*)
"""

COUNT_A_ZEXPR = "alphabet = a b\nind((a|b)*a) . ind((a|b)*)\n"
A_ASTAR_ZEXPR = "alphabet = a b\nind(a(a|b)*)\n"
STAR_ZEXPR = "alphabet = a\nstar(-3 * ind(a*a))\n"
PAIRS_ZMSO = "alphabet = a b\ncount[x, y] a(x) & b(y)\n"
POWERSET_ZMSO = "alphabet = a\ncount[X] true\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_expression(files, capsys):
    path = files("signed.zexpr", SIGNED_ZEXPR)
    code, out, _ = run(capsys, "eval", path, "aaa")
    assert code == 0 and out.strip() == "-3"
    code, out, _ = run(capsys, "eval", path)
    assert code == 0 and out.strip() == "0"


def test_eval_star_expression(files, capsys):
    path = files("geo.zexpr", STAR_ZEXPR)
    code, out, _ = run(capsys, "eval", path, "aaa")
    assert code == 0 and out.strip() == "-12"


def test_eval_mso(files, capsys):
    path = files("pairs.zmso", PAIRS_ZMSO)
    code, out, _ = run(capsys, "eval", path, "aabb")
    assert code == 0 and out.strip() == "4"


def test_compile_and_json_round_trip(files, capsys, tmp_path):
    path = files("wa.zexpr", COUNT_A_ZEXPR)
    code, out, _ = run(capsys, "compile", path, "--target", "linrep",
                       "--minimize")
    assert code == 0
    rep_path = tmp_path / "wa.json"
    rep_path.write_text(out)
    code, out2, _ = run(capsys, "eval", str(rep_path), "abab")
    assert code == 0 and out2.strip() == "2"


def test_compile_cplc_json(files, capsys, tmp_path):
    path = files("wa.zexpr", COUNT_A_ZEXPR)
    code, out, _ = run(capsys, "compile", path, "--target", "cplc")
    assert code == 0
    data = json.loads(out)
    assert "terms" in data
    p = tmp_path / "wa_cplc.json"
    p.write_text(out)
    code, out2, _ = run(capsys, "eval", str(p), "aba")
    assert code == 0 and out2.strip() == "2"


def test_minimize_text(files, capsys):
    path = files("signed.zexpr", SIGNED_ZEXPR)
    code, out, _ = run(capsys, "minimize", path, "--format", "text")
    assert code == 0 and "dimension 2" in out


def test_equiv_yes_and_no(files, capsys):
    f = files("signed.zexpr", SIGNED_ZEXPR)
    g = files("wa.zexpr", COUNT_A_ZEXPR)
    h = files("signed2.zexpr", SIGNED_ZEXPR)
    code, out, _ = run(capsys, "equiv", f, h)
    assert code == 0 and "equivalent" in out
    code, out, _ = run(capsys, "equiv", f, f.replace("signed", "signed2"))
    assert code == 0
    # different alphabets aside, compare against a perturbed version
    perturbed = files("pert.zexpr", SIGNED_ZEXPR.rstrip() + " + ind(aaa)\n")
    code, out, _ = run(capsys, "equiv", f, perturbed)
    assert code == 1 and "distinguishing" in out


def test_equiv_mod(files, capsys):
    f = files("wa.zexpr", COUNT_A_ZEXPR)
    g = files("twice.zexpr", "alphabet = a b\n2 * ind((a|b)*a) . ind((a|b)*)\n")
    code, out, _ = run(capsys, "equiv", f, g, "--mod", "0")
    assert code == 1
    code, out, _ = run(capsys, "equiv", f, g, "--mod", "1")
    assert code == 0


def test_growth(files, capsys):
    f = files("wa.zexpr", COUNT_A_ZEXPR)
    code, out, _ = run(capsys, "growth", f)
    assert code == 0 and out.startswith("degree 1")
    g = files("ind.zexpr", A_ASTAR_ZEXPR)
    code, out, _ = run(capsys, "growth", g)
    assert code == 0 and out.startswith("degree 0")


def test_growth_rejects_linrep_input(files, capsys):
    f = files("geo.zexpr", STAR_ZEXPR)
    code, _, err = run(capsys, "growth", f)
    assert code == 3 and "input error" in err


def test_rt_formats(files, capsys):
    f = files("signed.zexpr", SIGNED_ZEXPR)
    code, out, _ = run(capsys, "rt", f, "-k", "1")
    assert code == 0 and out.startswith("2 states at level 1")
    code, out, _ = run(capsys, "rt", f, "-k", "1", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    code, out, _ = run(capsys, "rt", f, "-k", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [s["output"] for s in data["states"]] == [0, -1]


def test_starfree(files, capsys):
    yes = files("ind.zexpr", A_ASTAR_ZEXPR)
    code, out, _ = run(capsys, "starfree", yes)
    assert code == 0 and out.startswith("star-free")
    no = files("even.zexpr", "alphabet = a\nind((aa)*)\n")
    code, out, _ = run(capsys, "starfree", no)
    assert code == 1 and out.startswith("not star-free")


def test_spectrum(files, capsys):
    f = files("signed.zexpr", SIGNED_ZEXPR)
    code, out, _ = run(capsys, "spectrum", f, "--mode", "zero_union_unity")
    assert code == 0 and "conform" in out
    code, out, _ = run(capsys, "spectrum", f, "--mode", "zero_one")
    assert code == 1 and "violation" in out
    g = files("pow.zmso", POWERSET_ZMSO)
    code, out, _ = run(capsys, "spectrum", g, "--mode", "zero_union_unity")
    assert code == 1


MORPHISM_JSON = json.dumps({
    "monoid": {"size": 2, "table": [[0, 1], [1, 0]], "unit": 0},
    "letters": {"a": 1, "b": 0},
})


def test_forest_command(files, capsys):
    m = files("parity.json", MORPHISM_JSON)
    code, out, _ = run(capsys, "forest", m, "abaab")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1].startswith("depth ") and "(bound 6)" in lines[-1]
    code, out, _ = run(capsys, "forest", m, "abaab", "--format", "dot")
    assert code == 0 and out.startswith("digraph")


def test_forest_bad_word(files, capsys):
    m = files("parity.json", MORPHISM_JSON)
    code, _, err = run(capsys, "forest", m, "abc")
    assert code == 3


def test_pump_command(files, capsys):
    f = files("wa.zexpr", COUNT_A_ZEXPR)
    code, out, _ = run(capsys, "pump", f)
    assert code == 0 and "degree 1" in out and "pattern:" in out


def test_input_errors(files, capsys, tmp_path):
    code, _, err = run(capsys, "eval", str(tmp_path / "missing.zexpr"), "a")
    assert code == 3
    bad = files("bad.zexpr", "alphabet = a\nind((\n")
    code, _, err = run(capsys, "eval", bad, "a")
    assert code == 3
    unk = files("data.txt", "hello")
    code, _, err = run(capsys, "eval", unk, "a")
    assert code == 3
    badjson = files("bad.json", "{not json")
    code, _, err = run(capsys, "eval", badjson, "a")
    assert code == 3
