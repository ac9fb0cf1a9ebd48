import csv
import io
import json
import subprocess
import sys

import pytest

from alphaebt.cli import main
from alphaebt.results import read_results


def write_csv(path, rows, header=("a", "b", "c")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow(header)
        w.writerows(rows)
    return str(path)


@pytest.fixture
def samples(tmp_path, rng):
    X = rng.dirichlet([3, 3, 3], size=20)
    Y = rng.dirichlet([2, 3, 5], size=25)
    return write_csv(tmp_path / "x.csv", X), write_csv(tmp_path / "y.csv", Y)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identical_files_give_p_one(samples, capsys):
    f1, _ = samples
    code, out, _ = run(["test", "--file1", f1, "--file2", f1, "--permutations", "99"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["p_value"] == [1.0] and doc["method"] == "alpha_ebt"
    assert doc["n"] == [20, 20] and doc["D"] == 3 and doc["alpha"] == [1.0]
    assert doc["runtime_seconds"] >= 0


def test_two_alpha_values(samples, capsys, tmp_path):
    f1, f2 = samples
    out_path = tmp_path / "res.json"
    code, out, _ = run(
        ["test", "--file1", f1, "--file2", f2, "--alpha", "0.1,1.0", "--permutations", "99", "--out", str(out_path)],
        capsys,
    )
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["alpha"] == [0.1, 1.0]
    assert len(doc["statistic"]) == len(doc["p_value"]) == 2
    assert json.loads(out) == doc


def test_csv_output(samples, capsys):
    f1, f2 = samples
    code, out, _ = run(
        ["test", "--file1", f1, "--file2", f2, "--alpha", "0.1,1", "--permutations", "49", "--format", "csv"], capsys
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["alpha"] for r in rows] == ["0.10000000000000001", "1"]
    assert all(0 < float(r["p_value"]) <= 1 for r in rows)


@pytest.mark.parametrize("method", ["rpbt", "euclidean-ebt"])
def test_other_methods(samples, capsys, method):
    f1, f2 = samples
    code, out, _ = run(["test", "--file1", f1, "--file2", f2, "--method", method, "--permutations", "49"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["method"] == method.replace("-", "_")
    assert doc["alpha"] is None


def test_zero_entry_with_alpha_zero(tmp_path, capsys, samples):
    _, f2 = samples
    f1 = write_csv(tmp_path / "z.csv", [[0.5, 0.5, 0.0], [0.2, 0.3, 0.5], [0.1, 0.1, 0.8]])
    code, _, err = run(["test", "--file1", f1, "--file2", f2, "--alpha", "0"], capsys)
    assert code == 2
    assert "alpha must be positive with zeros in the data" in err


@pytest.mark.parametrize(
    "rows, message",
    [
        ([["0.2", "0.3", "0.5"], ["0.2", "x", "0.5"]], "line 3, column 2"),
        ([["0.2", "0.3", "0.5"], ["0.2", "0.8"]], "line 3"),
        ([["0.2", "-0.3", "0.5"], ["0.2", "0.3", "0.5"]], "negative"),
    ],
)
def test_malformed_csv(tmp_path, capsys, samples, rows, message):
    _, f2 = samples
    f1 = write_csv(tmp_path / "bad.csv", rows)
    code, _, err = run(["test", "--file1", f1, "--file2", f2], capsys)
    assert code == 2
    assert message in err


def test_dimension_mismatch_and_missing_file(tmp_path, capsys, samples):
    f1, _ = samples
    f2 = write_csv(tmp_path / "d4.csv", [[0.25] * 4, [0.1, 0.2, 0.3, 0.4]], header=None)
    code, _, err = run(["test", "--file1", f1, "--file2", f2], capsys)
    assert code == 2 and "D=3" in err
    code, _, _ = run(["test", "--file1", f1, "--file2", str(tmp_path / "nope.csv")], capsys)
    assert code == 2


def test_simulate_type1_and_power(tmp_path, capsys):
    out = tmp_path / "t1.csv"
    code, _, _ = run(
        ["simulate", "type1", "--family", "dirichlet", "--dims", "3,4", "--sizes", "10",
         "--reps", "3", "--permutations", "19", "--projections", "5", "--out", str(out)],
        capsys,
    )
    assert code == 0
    rows = read_results(out)
    assert {r.D for r in rows} == {3, 4} and len(rows) == 2 * 3

    out, plot = tmp_path / "p.json", tmp_path / "p.svg"
    code, _, _ = run(
        ["simulate", "power", "--scenario", "4", "--dims", "4", "--sizes", "10,12", "--k-grid", "1:2:0.5",
         "--reps", "2", "--permutations", "19", "--projections", "5", "--format", "json",
         "--out", str(out), "--plot", str(plot)],
        capsys,
    )
    assert code == 0
    rows = read_results(out)
    assert sorted({r.k for r in rows}) == [1.0, 1.5, 2.0]
    assert {r.n for r in rows} == {10, 12}
    assert plot.read_bytes().startswith(b"<?xml")


def test_bad_arguments_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "power", "--scenario", "7", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["test", "--file1", "a", "--file2", "b", "--seed", "-1"])
    assert exc.value.code == 2


def test_module_entry_point(samples):
    f1, _ = samples
    proc = subprocess.run(
        [sys.executable, "-m", "alphaebt", "test", "--file1", f1, "--file2", f1, "--permutations", "9"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["p_value"] == [1.0]
