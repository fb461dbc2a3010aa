import csv
import io
import json
import subprocess
import sys

import pytest

from leebounds.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_weights(capsys):
    assert run(capsys, "weights", "--q", "7", "1", "6", "0")[:2] == (0, "2\n")
    assert run(capsys, "weights", "--p", "7", "3:3", "6:1")[:2] == (0, "8\n")


def test_sphere_table_csv(capsys):
    rc, out, _ = run(capsys, "sphere-table", "--p", "7")
    assert rc == 0
    table = rows(out)
    assert table[0] == ["M", "S", "B", "W_at_B"]
    assert [r[1] for r in table[1:]] == ["1", "4", "8", "12", "12", "8", "4"]
    assert [r[3] for r in table[1:]] == ["0", "4", "20", "56", "104", "144", "168"]


def test_sphere_table_json_to_file(capsys, tmp_path):
    path = tmp_path / "t.json"
    rc, out, _ = run(capsys, "sphere-table", "--p", "5", "--format", "json", "--out", str(path))
    assert rc == 0 and out == ""
    doc = json.loads(path.read_text())
    assert doc["B"] == [1, 5, 13, 21, 25]


def test_bound(capsys):
    rc, out, _ = run(capsys, "bound", "--name", "victoria", "--q", "121", "--delta", "0.1", "--format", "json")
    assert rc == 0
    assert json.loads(out)["rate"] == pytest.approx(-0.1 - 0.2 + (1.04) ** 0.5)
    rc, out, _ = run(capsys, "bound", "--name", "astola", "--q", "11", "--delta", "0.2")
    assert rc == 0 and rows(out)[0][:3] == ["name", "delta", "rate"]
    rc, out, _ = run(capsys, "bound", "--name", "descent-delta", "--p", "7", "--rate", "0.1", "--gamma", "0.1", "--format", "json")
    assert rc == 0 and json.loads(out)["delta"] == pytest.approx(0.4)


def test_bound_errors(capsys):
    rc, _, err = run(capsys, "bound", "--name", "victoria", "--q", "5", "--delta", "0.1")
    assert rc == 3 and "error" in err
    assert run(capsys, "bound", "--name", "astola", "--q", "11")[0] == 2
    assert run(capsys, "bound", "--name", "astola", "--q", "11", "--delta", "0.9")[0] == 3


def test_compare_with_crossover(capsys):
    rc, out, err = run(capsys, "compare", "--curves", "astola:q=25,victoria:q=25", "--grid", "0.0001:0.2:50", "--crossover")
    assert rc == 0
    table = rows(out)
    assert table[0] == ["delta", "astola(q=25)", "victoria(q=25,gamma=0.25,source=square_field)"] and len(table) == 51
    assert "delta* = 0.0307" in err


def test_compare_bad_grid():
    with pytest.raises(SystemExit) as exc:
        main(["compare", "--curves", "concat-asymptote", "--grid", "1:0:5"])
    assert exc.value.code == 2


def test_delta_q(capsys):
    rc, out, _ = run(capsys, "delta-q", "--q", "25,49")
    assert rc == 0
    assert [r[2] for r in rows(out)[1:]] == ["0.0307", "0.0095"]


def test_invert(capsys):
    rc, out, _ = run(capsys, "invert", "--which", "g", "--delta", "0.4", "--p", "7", "--format", "json")
    doc = json.loads(out)
    assert rc == 0
    assert doc["x"] == pytest.approx(0.2) and doc["x_cardano"] == pytest.approx(0.2)
    assert doc["alpha_lee_lower"] == pytest.approx(1 / 30)
    assert run(capsys, "invert", "--which", "f", "--delta", "0.4")[0] == 2


def test_verify(capsys):
    rc, out, _ = run(capsys, "verify", "victorian", "--p", "7", "--r", "1,2,3")
    assert rc == 0
    assert [r[2] for r in rows(out)[1:]] == ["12", "8", "6"]
    rc, out, _ = run(capsys, "verify", "victorian", "--p", "11", "--r", "4", "--cap", "10", "--format", "json")
    assert rc == 1
    assert "EnumerationCapExceeded" in json.loads(out)["checks"][0]["error"]


def test_code_build_and_distance(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"construction": "expanded_shortened_rs", "params": {"field_order": 9, "r": 2}}))
    rc, out, _ = run(capsys, "code", "build", "--spec", str(spec))
    assert rc == 0
    doc = json.loads(out)
    assert (doc["field_order"], doc["n"], doc["k"]) == (3, 16, 4)
    built = tmp_path / "code.json"
    built.write_text(out)
    rc, out, _ = run(capsys, "code", "distance", "--spec", str(built), "--format", "json")
    assert rc == 0
    assert json.loads(out)["lee_distance"] >= 7
    assert run(capsys, "code", "distance", "--spec", str(tmp_path / "missing.json"))[0] == 2


def test_concat_scan(capsys):
    rc, out, _ = run(capsys, "concat-scan", "--format", "json")
    assert rc == 0
    rel = {r["p"]: r["relation"] for r in json.loads(out)}
    assert rel[7] == "a_dominates" and rel[113] == "crossing"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "leebounds", "weights", "--q", "5", "2", "3"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == "4\n"
