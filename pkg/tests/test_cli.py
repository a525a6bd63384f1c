import io
import json
import subprocess
import sys

import pytest

from dihom.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def es_file(tmp_path):
    p = tmp_path / "es.pcs"
    code, text = call("examples", "emit", "empty-square")
    assert code == 0
    p.write_text(text)
    return str(p)


def test_examples_list_and_emit(tmp_path):
    code, text = call("examples", "list")
    assert code == 0 and "two-holes-diag" in text and "red-square" in text
    code, text = call("examples", "emit", "red-square")
    assert code == 0 and json.loads(text)["of"] == "empty-cube"
    target = tmp_path / "c.pcs"
    assert call("examples", "emit", "cube-3", "-o", str(target))[0] == 0
    assert json.loads(target.read_text())["name"] == "cube-3"


def test_examples_unknown(capsys):
    assert call("examples", "emit", "nope")[0] == 64
    assert "available" in capsys.readouterr().err


def test_check(es_file):
    code, text = call("check", es_file)
    assert code == 0 and "is_dag=true" in text
    code, text = call("check", es_file, "--json")
    assert json.loads(text)["flags"] == {"is_dag": True, "is_proper": True}


def test_check_invalid_and_cyclic(tmp_path, capsys):
    bad = tmp_path / "bad.pcs"
    bad.write_text('{"cells": [{"id": "v", "dim": 0}, {"id": "s", "dim": 2, "d0": ["v"], "d1": ["v"]}]}')
    assert call("check", str(bad))[0] == 1
    loop = tmp_path / "loop.pcs"
    loop.write_text('{"cells": [{"id": "v", "dim": 0}, {"id": "e", "dim": 1, "d0": ["v"], "d1": ["v"]}]}')
    assert call("check", str(loop))[0] == 2
    assert call("homology", str(loop))[0] == 2
    assert "cycle" in capsys.readouterr().err
    assert call("homology", str(bad))[0] == 1
    syntax = tmp_path / "syntax.pcs"
    syntax.write_text("{")
    assert call("homology", str(syntax))[0] == 1


def test_homology_table_and_json(es_file):
    code, text = call("homology", es_file, "--degree", "1")
    assert code == 0
    row4 = [l for l in text.splitlines() if l.strip().startswith("4 |")][0]
    assert row4.split()[2] == "R^2"
    code, text = call("homology", es_file, "--degree", "1", "--json", "--generators")
    doc = json.loads(text)
    assert doc["blocks"]["4,1"]["dim"] == 2 and len(doc["blocks"]["4,1"]["generators"]) == 2


def test_homology_pairs_and_fields():
    code, text = call("homology", "fixture:two-holes-diag", "--degree", "1", "--pairs", "9,1", "--json")
    assert json.loads(text)["blocks"] == {"9,1": {"dim": 4}}
    code, text = call("homology", "fixture:empty-cube", "--max-degree", "2", "--json", "--field", "fp:5")
    doc = json.loads(text)
    assert [d["degree"] for d in doc] == [1, 2] and doc[1]["field"] == "fp:5"
    assert doc[1]["blocks"] == {"000,111": {"dim": 1}}


def test_usage_errors(capsys):
    assert call("homology", "fixture:d-2", "--degree", "0")[0] == 64
    assert call("homology", "fixture:d-2", "--field", "fp:6")[0] == 64
    assert call("homology", "fixture:d-2", "--pairs", "00")[0] == 64
    assert call("homology", "fixture:d-2", "--pairs", "00,zz")[0] == 64
    assert call("homology", "/no/such/file")[0] == 64
    with pytest.raises(SystemExit) as e:
        call("frobnicate")
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        call("homology", "x", "--degree", "1", "--max-degree", "2")
    assert e.value.code == 64


def test_relative_command():
    code, text = call("relative", "fixture:empty-cube", "--y", "sub:red-square",
                      "--pairs", "000,111", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["ok"]
    assert doc["blocks"]["000,111"]["dims"] == [0, 1, 6, 6, 1, 0]


def test_relative_inline_and_file_ids(tmp_path):
    ids = tmp_path / "y.json"
    ids.write_text('{"of": "d-2", "ids": ["a0", "1a", "0a", "a1"]}')
    code, text = call("relative", "fixture:d-2", "--y", f"@{ids}", "--pairs", "00,11")
    assert code == 0 and "exact: true" in text
    code2, text2 = call("relative", "fixture:d-2", "--y", "a0,1a,0a,a1", "--pairs", "00,11")
    assert (code2, text2) == (code, text)
    code3, _ = call("relative", "fixture:d-2", "--y", '["a0", "1a", "0a", "a1"]', "--pairs", "00,11")
    assert code3 == 0


def test_relative_expect_flags_inconsistent_profile():
    code, text = call("relative", "fixture:d-2", "--y", "sub:d-2-boundary", "--pairs", "00,11",
                      "--expect", "00,11=0,1,1,2,1,0", "--json")
    doc = json.loads(text)
    [flag] = doc["expected"]
    assert code == 0
    assert flag["computed"] == [0, 0, 1, 2, 1, 0]
    assert not flag["matches"] and not flag["expected_profile_consistent"]


def test_relative_not_a_pair(capsys):
    assert call("relative", "fixture:two-holes-diag", "--y", "sub:diag-if")[0] == 2
    assert "relative pair" in capsys.readouterr().err


def test_mv_command(capsys):
    code, text = call("mv", "fixture:two-holes-diag", "--x1", "sub:diag-cover-x1",
                      "--x2", "sub:diag-cover-x2", "--pairs", "9,1", "--json")
    assert code == 0 and json.loads(text)["blocks"]["9,1"]["dims"] == [0, 0, 0, 6, 10, 4]
    assert call("mv", "fixture:two-holes-antidiag", "--x1", "sub:antidiag-cover-x1",
                "--x2", "sub:antidiag-cover-x2")[0] == 2
    assert call("mv", "fixture:two-holes-antidiag", "--x1", "sub:antidiag-central-x1",
                "--x2", "sub:antidiag-central-x2")[0] == 2
    assert call("mv", "fixture:two-holes-diag", "--x1", "sub:diag-cover-x1",
                "--x2", "sub:diag-cover-x1")[0] == 1
    capsys.readouterr()


def test_tensor_and_kunneth(es_file, tmp_path):
    out = tmp_path / "p.pcs"
    assert call("tensor", es_file, es_file, "-o", str(out))[0] == 0
    assert call("check", str(out))[0] == 0
    code, text = call("kunneth", es_file, es_file, "--max-degree", "2", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["ok"] and doc["blocks"] == 256


def test_fq_rank_bisim(es_file):
    code, text = call("fq", es_file, "--dot")
    assert code == 0 and text.startswith("digraph FQ")
    code, text = call("fq", es_file, "--json")
    doc = json.loads(text)
    assert doc["dims"]["4,1"] == 2 and len(doc["matrices"]) == len(doc["arrows"])
    code, text = call("rank-invariants", es_file, "--interval", "4,1:4,1",
                      "--interval", "4,4:4,1", "--json")
    assert [r["rank"] for r in json.loads(text)] == [2, 0]
    assert call("rank-invariants", es_file, "--interval", "4,1:4,4")[0] == 64
    assert call("rank-invariants", es_file, "--interval", "4,1")[0] == 64
    assert call("bisim", "fixture:two-holes-diag", "fixture:two-holes-antidiag")[1].strip() == "false"
    assert call("bisim", es_file, es_file)[1].strip() == "true"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dihom", "homology", "fixture:kronecker",
                          "--degree", "1", "--json"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["blocks"]["2,1"]["dim"] == 2


@pytest.mark.parametrize("name", ["two-holes-antidiag", "empty-cube", "matchbox"])
def test_json_and_table_agree(name):
    from dihom.bimodule import format_table
    from dihom import fixtures
    _, text = call("homology", f"fixture:{name}", "--max-degree", "2", "--json")
    _, table = call("homology", f"fixture:{name}", "--max-degree", "2", "--table")
    X = fixtures.emit_fixture(name)
    rendered = []
    for doc in json.loads(text):
        dims = {tuple(k.split(",")): v["dim"] for k, v in doc["blocks"].items()}
        rendered.append(f"HM_{doc['degree']}\n{format_table(dims, X.vertices)}\n")
    assert table == "\n".join(rendered) + "\n"
