import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qherm import cli
from qherm.discretize import Grid


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_empty_argv_prints_usage(capsys):
    code, out, err = run_cli([], capsys)
    assert code == 2
    assert "usage:" in err


def test_grid_with_negative_bound_parses():
    config = cli.parse_config(["spectrum", "--model", "morse-complex",
                               "--grid", "-4:16:2048:dirichlet"])
    assert config.grid == Grid(-4.0, 16.0, 2048, "dirichlet")


@pytest.mark.parametrize("argv, key", [
    (["spectrum", "--model", "morse-complex", "--A", "abc"], "A"),
    (["spectrum", "--model", "morse-complex", "--A", "inf"], "A"),
    (["spectrum", "--model", "morse-complex", "--grid", "0:1:4:periodic"], "grid"),
    (["spectrum", "--model", "nope"], "model"),
    (["spectrum", "--model", "susy", "--format", "xml"], "format"),
    (["spectrum", "--model", "susy", "--colour", "red"], "--colour"),
    (["spectrum"], "model"),
    (["probe", "--sizes", "8,16"], "sizes"),
])
def test_invalid_configuration_names_the_key(argv, key, capsys):
    code, out, err = run_cli(argv, capsys)
    assert code == 2
    assert key in err
    assert out == ""


def test_config_file_with_comments_and_flag_override(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# counterexample table\ncommand = counterexample\n"
                    "max_n = 5  # small\n\nformat = json\n")
    config = cli.parse_config(["--config", str(path), "--max-n", "3"])
    assert config.command == "counterexample"
    assert config.max_n == 3
    assert config.format == "json"


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("command = probe\nsmoothing = 2\n")
    code, _, err = run_cli(["--config", str(path)], capsys)
    assert code == 2 and "smoothing" in err


def test_counterexample_table(capsys):
    code, out, _ = run_cli(["counterexample", "--max-n", "32"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "n,m,ambient_distance,eta_distance"
    rows = rows_of(out)
    assert len(rows) == 32 * 31 // 2
    assert all(abs(float(r["eta_distance"]) - np.sqrt(2)) < 1e-12 for r in rows)


def test_spectrum_csv_round_trips_floats(capsys):
    code, out, _ = run_cli(["spectrum", "--model", "hatano-nelson", "--n-sites", "9",
                            "--g", "0.2"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "index,re,im,residual"
    re = np.array([float(r["re"]) for r in rows_of(out)])
    exact = -2 * np.cos(np.arange(1, 10) * np.pi / 10)
    assert np.abs(np.sort(re) - np.sort(exact)).max() < 1e-12


@pytest.mark.parametrize("argv, header", [
    (["metric", "--model", "gauge", "--grid", "-6:6:64:periodic"],
     "hermiticity_residual,min_eigenvalue,intertwining_residual,op_norm,intertwining_windowed"),
    (["transform", "--model", "hatano-nelson"], "check,residual"),
    (["transform", "--model", "susy", "--n-modes", "64"], "check,residual"),
    (["complete", "--model", "hatano-nelson", "--n-sites", "10"], "check,residual"),
    (["probe", "--eta", "resolvent"], "size,op_norm"),
])
def test_headers(argv, header, capsys):
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    assert out.splitlines()[0] == header


def test_probe_reports_classification(capsys, monkeypatch):
    monkeypatch.setenv("QHERM_THREADS", "2")
    code, out, err = run_cli(["probe", "--eta", "exp-p", "--sizes", "16,32,64"], capsys)
    assert code == 0
    assert "growing" in err
    norms = [float(r["op_norm"]) for r in rows_of(out)]
    assert norms == pytest.approx(np.exp([8.0, 16.0, 32.0]), rel=1e-10)


def test_json_output(capsys):
    code, out, _ = run_cli(["probe", "--eta", "identity", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["command"] == "probe"
    assert doc["classification"] == "bounded-plateau"
    assert [r["size"] for r in doc["results"]] == [64, 128, 256]


def test_numerical_failure_exit_code(capsys):
    code, out, err = run_cli(["spectrum", "--model", "hatano-nelson", "--g", "50"], capsys)
    assert code == 3
    assert out == "" and err.count("\n") == 1
    code, _, _ = run_cli(["metric", "--model", "morse-complex", "--theta", "40",
                          "--grid", "-4:16:128:periodic"], capsys)
    assert code == 3


def test_output_file_is_byte_identical_across_runs(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["complete", "--model", "hatano-nelson", "--n-sites", "12",
                         "--seed", "4", "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "qherm", "counterexample", "--max-n", "3"],
                          capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert done.stdout.splitlines()[1] == "1,2,1.224744871391589,1.414213562373095"
