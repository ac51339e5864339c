import json

import pytest

from almostempty.cli import main, run

from conftest import balanced_coloring, random_points


@pytest.fixture
def pts_file(tmp_path):
    P = random_points(20, 0)
    phi = balanced_coloring(20, 2, 0)
    path = tmp_path / "p.csv"
    path.write_text("x,y,color\n" + "".join(f"{p.x},{p.y},{k}\n" for p, k in zip(P, phi.colors)))
    return path


def _json(argv):
    out, err, code = run(argv)
    assert code == 0, err
    return json.loads(out)


def test_validate_text_and_collinear(tmp_path, pts_file):
    out, _, code = run(["validate", str(pts_file)])
    assert code == 0 and out.startswith("n=20\nhull=")
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0\n1,1\n2,2\n5,0\n")
    out, _, code = run(["validate", str(bad)])
    assert code == 2 and "collinear: ids 0 1 2" in out


def test_exit_codes(tmp_path, pts_file):
    assert run(["nosuch"])[2] == 1
    junk = tmp_path / "j.csv"
    junk.write_text("0,0\n1,x\n")
    out, err, code = run(["count", str(junk)])
    assert code == 1 and "line 2" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0\n1,1\n2,2\n")
    assert run(["count", str(bad)])[2] == 2
    assert run(["witness", str(pts_file), "--mode", "discrepancy", "--reproducible"])[2] == 3
    assert run(["count", str(tmp_path / "missing.csv")])[2] == 1
    assert run(["count", str(pts_file), "--format", "csv"])[2] == 1


def test_count_and_chroma(pts_file):
    doc = _json(["count", str(pts_file), "--smax", "2", "--reproducible"])
    assert "timestamp" not in doc
    doc = _json(["chroma", str(pts_file), "--s", "1", "--reproducible"])
    assert doc["class_sizes"] == [10, 10] and doc["scaled_discrepancy"] == 0
    assert "timestamp" in _json(["chroma", str(pts_file)])


def test_witness_modes(pts_file):
    doc = _json(["witness", str(pts_file), "--reproducible"])
    assert doc["certified"] and doc["count"] >= doc["claimed_bound"]
    doc = _json(["witness", str(pts_file), "--mode", "thm2", "--K", "1/2", "--reproducible"])
    assert doc["mode"] == "thm2" and doc["asymptotic_only"] in (True, False)
    doc = _json(["witness", str(pts_file), "--mode", "discrepancy", "--subset", "0,2,4,6,8",
                 "--coloring", "11111111111111111111", "--colors", "2", "--reproducible"])
    assert doc["supported"] and doc["count"] >= doc["claimed_bound"]


def test_simulate_deterministic_across_workers(monkeypatch):
    base = ["simulate", "--n", "20", "--trials", "3", "--smax", "1", "--reproducible"]
    a, _, _ = run(base + ["--seed", "9"])
    b, _, _ = run(base + ["--seed", "9", "--workers", "2"])
    assert a == b
    monkeypatch.setenv("ALMOSTEMPTY_SEED", "9")
    assert run(base)[0] == a
    csv_out, _, code = run(base + ["--format", "csv"])
    assert code == 0 and csv_out.splitlines()[0] == "n,s,quantity,trials,mean,sd,ci_lo,ci_hi,seed"
    monkeypatch.setenv("ALMOSTEMPTY_SEED", "abc")
    assert run(base)[2] == 1


def test_search(pts_file):
    doc = _json(["search", str(pts_file), "--colors", "2", "--budget", "500", "--reproducible"])
    assert doc["method"] == "local" and len(doc["coloring"]) == 20
    assert run(["search", str(pts_file)])[2] == 1


def test_scale_and_json_input(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("0.5,0.25\n3.1,0.0\n1.0,2.75\n")
    assert run(["count", str(p)])[2] == 1
    doc = _json(["count", str(p), "--scale", "100", "--reproducible"])
    assert doc["n"] == 3
    j = tmp_path / "q.json"
    j.write_text(json.dumps({"points": [[0, 0], [9, 1], [3, 8], [4, 3]], "colors": [1, 1, 1, 2], "c": 2}))
    # (4, 3) lies inside the color-1 triangle
    assert _json(["chroma", str(j), "--reproducible"])["count"] == 0
    doc = _json(["chroma", str(j), "--s", "1", "--reproducible"])
    assert doc["count"] == 1 and doc["c"] == 2


def test_main_writes(capsys, pts_file):
    assert main(["validate", str(pts_file)]) == 0
    assert capsys.readouterr().out.startswith("n=20")
