import csv
import io
import json
from fractions import Fraction as F

import pytest

from weakkam.cli import main


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, cost in (("I1", [[5]]), ("I2", [[1, 0], [0, 2]]), ("I3", [[0, 2], [3, 1]])):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps({"cost": cost}))
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_critical_I3(files, capsys):
    code, out, _ = run(capsys, "critical", "--input", files["I3"])
    data = json.loads(out)
    assert code == 0
    assert data["alpha_karp"] == data["alpha_lp"] == "0"
    assert F(data["alpha_discounted"]["estimate"]) == 0


def test_sweep_I3(files, capsys):
    code, out, _ = run(capsys, "sweep", "--input", files["I3"], "--schedule", "0.5,0.75,0.9")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["sup_error"] for r in rows] == ["0", "0", "0"]


def test_check_I2(files, capsys):
    code, out, _ = run(capsys, "check", "--input", files["I2"])
    assert code == 0
    assert "FAIL" not in out


def test_solve_and_output_file(files, capsys, tmp_path):
    target = tmp_path / "sol.json"
    code, out, _ = run(capsys, "solve", "--input", files["I3"], "--lambda", "1/4", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["values"] == ["0", "4/3"]


def test_barrier_mather_u0(files, capsys):
    _, out, _ = run(capsys, "barrier", "--input", files["I3"])
    assert json.loads(out)["h"] == [["0", "2"], ["3", "5"]]
    _, out, _ = run(capsys, "mather", "--input", files["I3"])
    assert [m["cycle"] for m in json.loads(out)["measures"]] == [[0, 0]]
    _, out, _ = run(capsys, "u0", "--input", files["I1"])
    assert json.loads(out)["u0"] == ["0"]


def test_float_mode_override(files, capsys):
    code, out, _ = run(capsys, "solve", "--input", files["I3"], "--lambda", "0.25", "--mode", "float64")
    assert code == 0
    assert json.loads(out)["values"][1] == pytest.approx(4 / 3)


def test_gen_then_solve(capsys, tmp_path):
    path = tmp_path / "g.json"
    assert main(["gen", "--n", "3", "--seed", "4", "--output", str(path)]) == 0
    again = tmp_path / "h.json"
    main(["gen", "--n", "3", "--seed", "4", "--output", str(again)])
    assert path.read_text() == again.read_text()
    code, out, _ = run(capsys, "u0", "--input", str(path))
    assert code == 0


def test_gen_torus(capsys):
    code, out, _ = run(capsys, "gen", "--kind", "torus_lagrangian", "--grid-size", "2")
    assert code == 0
    assert json.loads(out)["cost"] == [["0", "1/8"], ["1/8", "0"]]


@pytest.mark.parametrize("argv", [
    [],
    ["solve"],
    ["solve", "--input", "/nonexistent.json", "--lambda", "1/2"],
    ["frobnicate"],
    ["gen", "--n", "3", "--lo", "5", "--hi", "1"],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_bad_lambda_and_bad_instance(files, capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--input", files["I3"], "--lambda", "1")
    assert code == 2 and "lambda" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cost": [[1, 2, 3], [4, 5, 6]]}))
    code, _, err = run(capsys, "barrier", "--input", str(bad))
    assert code == 2 and "non-square" in err


def test_check_fails_with_exit_1(capsys, tmp_path):
    # a generic random instance misses the 1e-6 sweep threshold
    path = tmp_path / "r.json"
    main(["gen", "--n", "4", "--seed", "0", "--output", str(path)])
    code, out, err = run(capsys, "check", "--input", str(path))
    assert code == 1
    assert "sweep" in err
