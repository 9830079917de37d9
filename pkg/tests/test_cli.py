import io
import json

import pytest

from conftest import FIXTURES

from dmag.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in FIXTURES.items():
        p = tmp_path / f"{name}.g"
        p.write_text(text + "\n")
        paths[name] = str(p)
    return paths


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--json")
    return code, json.loads(out)


def test_validate(files):
    assert run("validate", files["MAX4"])[:2] == (0, "DMAG\n")
    code, out, _ = run("validate", files["NONMAX4"])
    assert code == 1 and "max ⟨C,A,B,D⟩" in out


def test_equiv(files):
    code, out, _ = run("equiv", files["CHAIN3"], files["COLL3"])
    assert code == 1 and "e2 ⟨A,B,C⟩" in out
    assert run("equiv", files["CHAIN3"], files["BIARC"])[0] == 0
    code, out, _ = run("equiv", "--oracle", files["CHAIN3"], files["COLL3"])
    assert code == 1 and "A and C given {}" in out


def test_equiv_rejects_non_dmag(files):
    code, _, err = run("equiv", files["NONMAX4"], files["MAX4"])
    assert code == 2 and "not a DMAG" in err


def test_equiv_agrees_with_oracle_on_fixtures(files):
    names = [n for n in FIXTURES if n != "NONMAX4"]
    for a in names:
        for b in names:
            syn = run("equiv", files[a], files[b])
            sem = run("equiv", "--oracle", files[a], files[b])
            assert syn[0] == sem[0], (a, b, syn, sem)


def test_msep(files):
    assert run("msep", files["CHAIN3"], "--x", "A", "--y", "C", "--given", "B")[:2] == (0, "m-separated\n")
    code, out, _ = run("msep", files["CHAIN3"], "--x", "A", "--y", "C")
    assert code == 1 and "path ⟨A,B,C⟩" in out
    code, _, err = run("msep", files["CHAIN3"], "--x", "A", "--y", "Q")
    assert code == 2 and "Q" in err


def test_project(tmp_path):
    p = tmp_path / "iv.g"
    p.write_text("L -> X\nL -> Y\n")
    code, out, _ = run("project", str(p), "--latent", "L")
    assert code == 0 and out == "X <-> Y\n"


def test_legal_and_reverse(files):
    assert run("legal", files["K2"], "--edge", "A,B", "--at", "A", "--to", "arrow")[0] == 0
    code, out, _ = run("legal", files["CHAIN3"], "--edge", "B,C", "--at", "B", "--to", "arrow")
    assert code == 1 and "t2" in out
    assert run("reverse", files["CHAIN3"], "--edge", "A,B")[0] == 0
    code, out, _ = run("reverse", files["CHAIN3"], "--edge", "B,C")
    assert code == 1 and "pa" in out
    assert run("legal", files["CHAIN3"], "--edge", "A,C", "--at", "A", "--to", "arrow")[0] == 2


def test_class_invariant_leg(files):
    code, out, _ = run("class", files["K2"])
    assert code == 0 and out.startswith("members: 3\n")
    code, rep = run_json("invariant", files["COLL3"])
    assert rep["stats"]["invariant_arrowheads"] == [[["A", "B"], "B"], [["B", "C"], "B"]]
    assert run("leg", files["COLL3"])[1] == "A -> B\nC -> B\n"
    code, _, err = run("class", files["CHAIN3"], "--cap", "2")
    assert code == 3 and "cap" in err


def test_transform_and_shortest(files):
    code, out, _ = run("transform", files["CHAIN3"], files["FORK3"])
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("START ") and lines[1].startswith("CHANGE ")
    code, rep = run_json("shortest", files["CHAIN3"], files["FORK3"])
    assert code == 0 and rep["stats"]["length"] == rep["stats"]["difference"] == 2
    code, rep = run_json("transform", files["CHAIN3"], files["COLL3"])
    assert code == 1 and rep["verdict"] is False
    assert rep["witnesses"] == [{"tag": "query", "vertices": ["A", "C"], "detail": []}]


def test_json_schema(files):
    code, rep = run_json("validate", files["MAX4"])
    assert set(rep) == {"verb", "inputs", "verdict", "witnesses", "sequence", "stats"}
    assert rep["verb"] == "validate" and rep["inputs"] == [files["MAX4"]] and rep["verdict"] is True
    code, rep = run_json("equiv", files["CHAIN3"], files["COLL3"])
    assert rep["witnesses"] == [{"tag": "e2", "vertices": ["A", "B", "C"],
                                 "detail": rep["witnesses"][0]["detail"]}]


def test_export_dot(files):
    code, out, _ = run("export-dot", files["BIARC"])
    assert code == 0 and out.startswith("digraph") and "dir=both" in out


def test_conjecture_is_deterministic(tmp_path):
    args = ("conjecture", "--vertices", "4", "--trials", "15", "--seed", "3")
    first, second = run(*args), run(*args)
    assert first == second and first[0] == 0
    assert "criterion/oracle disagreements 0" in first[1]


def test_parse_error_names_file_line_column(tmp_path):
    p = tmp_path / "bad.g"
    p.write_text("A -> B\nB -- C\n")
    code, _, err = run("validate", str(p))
    assert code == 2
    assert err.startswith(f"error: {p}:2:3: undirected")


def test_missing_file_and_unknown_flag(tmp_path):
    assert run("validate", str(tmp_path / "nope.g"))[0] == 2
    with pytest.raises(SystemExit) as exc:
        run("validate", "x.g", "--bogus")
    assert exc.value.code == 2


def test_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("A <-> B\n"))
    assert run("validate", "-")[:2] == (0, "DMAG\n")
