import json
import subprocess
import sys
from pathlib import Path

import pytest

from simplotope.cli import main
from simplotope.gridfile import GridFileError, dumps, load, loads

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_conditions_document(capsys):
    code, out, _ = run(capsys, "conditions", DATA / "square_triangle.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["order"] == 1 and doc["mode"] == "sound"
    assert len(doc["condition_sets"]) == 1
    nrows, ncols = doc["matrix"]["shape"]
    assert ncols == 9 + 6 and nrows == len(doc["condition_sets"][0]["conditions"])


def test_conditions_literal_carries_one_third(capsys):
    _, out, _ = run(capsys, "conditions", DATA / "square_triangle.json", "--mode", "literal")
    weights = {t["weight"] for c in json.loads(out)["condition_sets"][0]["conditions"] for t in c["terms"]}
    assert "1/3" in weights


def test_conditions_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "conditions", DATA / "row.json", "--out", a)
    run(capsys, "conditions", DATA / "row.json", "--out", b)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("grid", ["square_triangle.json", "row.json", "squares.json"])
def test_verify_passes(capsys, grid):
    code, out, _ = run(capsys, "verify", DATA / grid, "--samples", "5")
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_literal_fails(capsys):
    code, out, _ = run(capsys, "verify", DATA / "square_triangle.json", "--mode", "literal", "--samples", "5")
    assert code == 1
    assert not json.loads(out)["passed"]


def test_verify_replay(capsys, tmp_path):
    m = tmp_path / "m.json"
    assert run(capsys, "conditions", DATA / "squares.json", "--out", m)[0] == 0
    code, out, _ = run(capsys, "verify", DATA / "squares.json", "--matrix", m, "--samples", "4")
    assert code == 0
    # a matrix from another grid does not fit
    other = tmp_path / "o.json"
    run(capsys, "conditions", DATA / "square_triangle.json", "--out", other)
    assert run(capsys, "verify", DATA / "squares.json", "--matrix", other)[0] == 2


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "conditions", DATA / "row_bc.json")[0] == 3
    assert run(capsys, "verify", DATA / "row_bc.json")[0] == 3
    assert run(capsys, "conditions", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "bnet", bad)[0] == 2
    doc = json.loads((DATA / "square_triangle.json").read_text())
    doc["patches"][1]["degrees"] = [2, 3]
    mismatch = tmp_path / "mismatch.json"
    mismatch.write_text(json.dumps(doc))
    code, _, err = run(capsys, "conditions", mismatch)
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit):
        main(["conditions", str(DATA / "row.json"), "--order", "-1"])


def test_bnet_and_circumscribe(capsys):
    code, out, _ = run(capsys, "bnet", DATA / "single.json", "--render-float")
    assert code == 0
    patch = json.loads(out)["patches"][0]
    assert "point_float" in patch["bnet"][0]
    code, out, _ = run(capsys, "circumscribe", DATA / "square_triangle.json")
    doc = json.loads(out)
    assert code == 0 and len(doc["patches"]) == 2 and len(doc["pairs"]) == 1
    assert doc["pairs"][0]["left"] == "square"


def test_gridfile_roundtrip():
    grid = load(DATA / "row.json")
    assert loads(dumps(grid)) == grid
    assert load(DATA / "squares.json").index_pairs() == "auto"


@pytest.mark.parametrize(
    "text",
    [
        "[]",
        '{"patches": 3}',
        '{"patches": [{"id": "a", "base": [0], "blocks": [[[1]]], "degrees": [1, 1]}]}',
        '{"patches": [{"id": "a", "base": [0], "blocks": [[[1]]], "degrees": [-1]}]}',
        '{"patches": [{"id": "a", "base": [0.5], "blocks": [[[1]]], "degrees": [1]}]}',
        '{"patches": [{"id": "a", "base": [0], "blocks": [[[0]]], "degrees": [1]}]}',
        '{"patches": [], "adjacencies": [["a", "b"]]}',
        '{"patches": [], "order": -1}',
    ],
)
def test_gridfile_rejects(text):
    with pytest.raises(GridFileError):
        loads(text)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "simplotope", "conditions", str(DATA / "row_bc.json")],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 3
    assert "not" in res.stderr
