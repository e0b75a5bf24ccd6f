import json

import pandas as pd
import pytest
from click.testing import CliRunner

from app.cli import bench


def runner():
    return CliRunner(mix_stderr=False)


def test_exact_command(tmp_path):
    path = tmp_path / "k2.json"
    path.write_text(json.dumps({"n": 2, "q": [[-1, 2], [0, -1]], "gamma": 0, "reg_target": 0, "offset": 0}))
    result = runner().invoke(bench, ["exact", "--qubo", str(path)])
    assert result.exit_code == 0, result.stderr
    body = json.loads(result.stdout)
    assert body["best_value"] == -1
    assert body["optima_count"] == 2


def test_exact_command_reports_bad_files(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 3, "q": [[-1, 2], [0, -1]]}))
    result = runner().invoke(bench, ["exact", "--qubo", str(path)])
    assert result.exit_code == 1
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "DimensionMismatchError"


def test_graph_command(tmp_path):
    out = tmp_path / "g.json"
    result = runner().invoke(bench, ["graph", "--n", "6", "--seed", "1", "--out", str(out)])
    assert result.exit_code == 0, result.stderr
    assert json.loads(out.read_text())["n"] == 6


def test_maxcut_command_writes_results(tmp_path):
    args = ["maxcut", "--sizes", "2,3", "--repeats", "2", "--iterations", "3", "--batch", "5",
            "--seed", "9", "--out", str(tmp_path), "--no-plots"]
    result = runner().invoke(bench, args)
    assert result.exit_code == 0, result.stderr
    frame = pd.read_csv(tmp_path / "results.csv")
    assert len(frame) == 4
    assert (tmp_path / "aggregate.json").exists()
    assert (tmp_path / "series" / "time_vs_size.json").exists()
    assert not (tmp_path / "plots").exists()


def test_maxcut_command_is_deterministic(tmp_path):
    frames = []
    for name in ("a", "b"):
        args = ["maxcut", "--sizes", "3,4", "--repeats", "1", "--iterations", "2", "--batch", "4",
                "--seed", "1", "--out", str(tmp_path / name), "--no-plots"]
        assert runner().invoke(bench, args).exit_code == 0
        frame = pd.read_csv(tmp_path / name / "results.csv").drop(columns=["bbs_time", "exact_time"])
        frames.append(frame.to_csv(index=False))
    assert frames[0] == frames[1]


def test_jssp_command(tmp_path):
    args = ["jssp", "--tmax", "3", "--weights", "1,2,5,1", "--gamma", "1", "--seed", "0",
            "--iterations", "3", "--batch", "5", "--out", str(tmp_path), "--no-plots"]
    result = runner().invoke(bench, args)
    assert result.exit_code == 0, result.stderr
    assert (tmp_path / "series" / "gantt.json").exists()


def test_jssp_command_infeasible_horizon(tmp_path):
    result = runner().invoke(bench, ["jssp", "--tmax", "2", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "InfeasibleHorizonError"


def test_bad_weights_are_a_usage_error(tmp_path):
    result = runner().invoke(bench, ["jssp", "--weights", "1,2", "--out", str(tmp_path)])
    assert result.exit_code == 2
    error = json.loads(result.stderr.strip().splitlines()[-1])
    assert error["error"] == "BadParameter"
    assert "four values" in error["message"]


def test_unparseable_sizes_are_a_json_usage_error(tmp_path):
    result = runner().invoke(bench, ["maxcut", "--sizes", "2,x", "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "BadParameter"


def test_unknown_option_is_a_json_usage_error():
    result = runner().invoke(bench, ["exact", "--matrix", "q.json"])
    assert result.exit_code == 2
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "NoSuchOption"


@pytest.mark.parametrize("body", [{"offset": 0}, {"n": 2, "q": [[1, 2], [3]]}])
def test_exact_command_reports_malformed_files(tmp_path, body):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(body))
    result = runner().invoke(bench, ["exact", "--qubo", str(path)])
    assert result.exit_code == 1
    assert result.exception is None or isinstance(result.exception, SystemExit)
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "ValidationError"


def test_exact_command_reports_non_json_files(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json")
    result = runner().invoke(bench, ["exact", "--qubo", str(path)])
    assert result.exit_code == 1
    assert json.loads(result.stderr.strip().splitlines()[-1])["error"] == "JSONDecodeError"


def test_jssp_command_accepts_an_input_state(tmp_path):
    args = ["jssp", "--tmax", "3", "--input-state", "1,0,1", "--iterations", "2", "--batch", "4",
            "--out", str(tmp_path), "--no-plots"]
    result = runner().invoke(bench, args)
    assert result.exit_code == 0, result.stderr
    frame = pd.read_csv(tmp_path / "results.csv")
    assert set(frame["input_state"]) == {"1-0-1"}
