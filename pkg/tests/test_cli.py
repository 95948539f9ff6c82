from __future__ import annotations

import json

from mdsforge import schemas
from mdsforge.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_field(capsys):
    code, rep = run(capsys, "field", "--q", "4", "--tables")
    assert code == EXIT_OK
    schemas.validate(rep, schemas.REPORT)
    assert rep["results"]["mul"][2][2] == 3 and rep["field"]["modulus"] == [1, 1, 1]


def test_geometry(capsys):
    code, rep = run(capsys, "geometry", "--q", "3", "--k", "2")
    assert rep["results"]["points"] == 13


def test_code_gen_and_verify(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, rep = run(capsys, "code", "gen", "--grs", "--q", "5", "--k", "3", "--out", str(path))
    assert code == EXIT_OK and rep["results"]["is_mds"]
    doc = schemas.load(str(path), schemas.CODE)
    assert doc["n"] == 6
    code, rep = run(capsys, "code", "verify", "--code", str(path))
    assert code == EXIT_OK and rep["results"]["min_distance"] == 4


def test_random_code_is_seeded(capsys, tmp_path):
    a = run(capsys, "code", "gen", "--random", "--q", "7", "--k", "3", "--n", "6", "--seed", "4")[1]
    b = run(capsys, "code", "gen", "--random", "--q", "7", "--k", "3", "--n", "6", "--seed", "4")[1]
    assert a["results"] == b["results"] and a["inputs_digest"] == b["inputs_digest"]


def test_verify_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"q": 2, "k": 2, "n": 2, "words": [[0, 0], [0, 1], [1, 0], [0, 0]]}))
    code, rep = run(capsys, "code", "verify", "--code", str(path))
    assert code == EXIT_FAILED and rep["results"]["is_mds"] is False


def test_schema_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"q": 3}))
    assert main(["code", "verify", "--code", str(path)]) == EXIT_USAGE
    path.write_text("{nope")
    assert main(["code", "verify", "--code", str(path)]) == EXIT_USAGE
    assert main(["no-such-command"]) == EXIT_USAGE


def test_extend_conic_q4(capsys, tmp_path):
    path = tmp_path / "conic.json"
    run(capsys, "code", "gen", "--q", "4", "--k", "3", "--n", "5", "--out", str(path))
    code, one = run(capsys, "extend", "--code", str(path), "--classify-le")
    assert code == EXIT_OK
    r = one["results"]
    assert r["maximal"] is False and r["all_le"] is True and r["count"] == 1
    _, two = run(capsys, "extend", "--code", str(path), "--classify-le", "--jobs", "2")
    assert one["results"] == two["results"] and one["inputs_digest"] == two["inputs_digest"]


def test_puncture(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "code", "gen", "--q", "3", "--k", "3", "--n", "4", "--out", str(path))
    _, rep = run(capsys, "code", "puncture", "--code", str(path), "--position", "0", "--symbol", "1")
    assert rep["results"]["is_mds"] and rep["results"]["code"]["k"] == 2


def test_arc_commands(capsys, tmp_path):
    _, rep = run(capsys, "arc", "max", "--q", "4")
    assert rep["results"]["m"] == 6 and rep["results"]["hyperoval"]
    _, rep = run(capsys, "arc", "nrc", "--q", "4")
    path = tmp_path / "arc.json"
    path.write_text(json.dumps(rep["results"]))
    _, rep = run(capsys, "arc", "check", "--file", str(path))
    assert rep["results"]["extending"] == [[0, 1, 0]]


def test_brs(capsys, tmp_path):
    code, rep = run(capsys, "brs", "verify", "--q", "5", "--k", "3", "--n", "5")
    assert code == EXIT_OK and rep["results"]["identical"]
    path = tmp_path / "dual.json"
    path.write_text(json.dumps({"q": 3, "k": 2, "hyperplanes": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    code, rep = run(capsys, "brs", "transversal", "--dual-arc", str(path))
    assert rep["results"]["count"] == 12 and all(s["trace_extends"] for s in rep["results"]["sets"])


def test_redei(capsys, tmp_path):
    fpath = tmp_path / "f.json"
    fpath.write_text(json.dumps({"q": 3, "values": [0, 1, 1]}))
    _, rep = run(capsys, "redei", "directions", "--function", str(fpath))
    assert rep["results"]["directions"] == [0, 1, 2]
    spath = tmp_path / "a.json"
    spath.write_text(json.dumps({"q": 3, "k": 2, "points": [[1, 0, 0], [1, 2, 0], [0, 1, 0]]}))
    _, rep = run(capsys, "redei", "primitive", "--set", str(spath), "--exhaustive")
    assert rep["results"]["primitive"] is False and len(rep["results"]["witness"]) == 3
    _, rep = run(capsys, "redei", "pq", "--q", "2")
    assert rep["results"]["value"] == "inf"


def test_nets(capsys, tmp_path):
    cpath, npath = tmp_path / "c.json", tmp_path / "n.json"
    run(capsys, "code", "gen", "--q", "3", "--k", "2", "--n", "3", "--out", str(cpath))
    _, rep = run(capsys, "net", "from-code", "--code", str(cpath), "--mols", "--out", str(npath))
    assert "square 1" in rep["results"]["mols"]
    schemas.load(str(npath), schemas.NET)
    code, rep = run(capsys, "net", "verify", "--net", str(npath))
    assert code == EXIT_OK and rep["results"]["is_net"]
    _, rep = run(capsys, "net", "extend", "--net", str(npath))
    assert rep["results"]["count"] == 1


def test_theorem_check_subset_and_fault(capsys):
    code, rep = run(capsys, "theorem-check", "--suite", "plane-arc-sizes,net-code-correspondence", "--max-q", "3")
    assert code == EXIT_OK and rep["results"]["passed"]
    code, rep = run(capsys, "theorem-check", "--suite", "plane-arc-sizes", "--max-q", "3",
                    "--inject-fault", "plane-arc-sizes")
    assert code == EXIT_FAILED
    assert main(["theorem-check", "--max-q", "7"]) == EXIT_USAGE


def test_report_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    run(capsys, "--report", str(path), "field", "--q", "3")
    schemas.load(str(path), schemas.REPORT)


def test_budget_env(capsys, monkeypatch, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "code", "gen", "--q", "5", "--k", "2", "--n", "2", "--out", str(path))
    monkeypatch.setenv("MDSFORGE_BUDGET", "10")
    assert main(["extend", "--code", str(path)]) == EXIT_USAGE
