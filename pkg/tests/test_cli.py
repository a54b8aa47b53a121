import json
import subprocess
import sys

import numpy as np

import impact_game.cli as cli
from impact_game.cli import RunConfig, build_config, run
from impact_game.equilibrium import SolverBreakdownError, equilibrium_strategies
from impact_game.model import GameParams


def invoke(args, env=None):
    return subprocess.run([sys.executable, "-m", "impact_game.cli", *args],
                          capture_output=True, text=True, env=env)


def test_equilibrium_csv_matches_library(tmp_path):
    out = tmp_path / "eq.csv"
    result = invoke(["equilibrium", "--rho", "1", "--T", "1", "--N", "50",
                     "--theta", "0", "--x", "1", "--y", "1",
                     "--format", "csv", "--output", str(out)])
    assert result.returncode == 0
    lines = out.read_text().split("\n")
    assert lines[0] == "k,t_k,v_k,w_k,xi_k,eta_k"
    assert lines[-1] == ""  # trailing LF
    rows = [line.split(",") for line in lines[1:-1]]
    assert len(rows) == 51
    sol = equilibrium_strategies(GameParams(rho=1, T=1, N=50, theta=0, x=1, y=1))
    for k, row in enumerate(rows):
        assert int(row[0]) == k
        # emitted floats parse back to the exact binary values
        assert float(row[2]) == sol.v[k]
        assert float(row[3]) == sol.w[k]
        assert float(row[4]) == sol.xi_star[k]
        assert float(row[1]) == k * (1.0 / 50.0)


def test_json_round_trip(tmp_path):
    out = tmp_path / "eq.json"
    result = invoke(["equilibrium", "--N", "12", "--theta", "0.25", "--x", "2",
                     "--y", "-1", "--format", "json", "--output", str(out)])
    assert result.returncode == 0
    payload = json.loads(out.read_text())
    assert payload["meta"]["N"] == 12
    assert payload["meta"]["version"]
    sol = equilibrium_strategies(GameParams(rho=1, T=1, N=12, theta=0.25, x=2, y=-1))
    got = np.array([row[4] for row in payload["data"]["rows"]])
    assert np.array_equal(got, sol.xi_star)


def test_identical_config_identical_bytes(tmp_path):
    args = ["montecarlo", "--N", "20", "--samples", "4000", "--seed", "9",
            "--price-model", "random_walk", "--walk-scale", "0.1", "--format", "json"]
    first = invoke(args)
    second = invoke(args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_sweep_requires_n_list():
    result = invoke(["sweep", "--theta", "0.25"])
    assert result.returncode == 1
    assert "n-list" in result.stderr or "n_list" in result.stderr


def test_parameter_error_exit_code():
    result = invoke(["equilibrium", "--rho", "-3"])
    assert result.returncode == 1
    assert "rho" in result.stderr


def test_unknown_flag_exit_code():
    result = invoke(["equilibrium", "--bogus", "1"])
    assert result.returncode == 1


def test_internal_error_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "equilibrium_strategies",
                        lambda params: (_ for _ in ()).throw(SolverBreakdownError("pivot 3")))
    assert run(RunConfig(command="equilibrium")) == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("rho = 2.0\nN = 8\ntheta = 0.25  # comment\nx = 1\ny = 0.5\nformat = csv\n")
    config = build_config(["equilibrium", "--config", str(cfg), "--N", "6"])
    assert config.rho == 2.0
    assert config.N == 6  # flag wins
    assert config.theta == 0.25
    assert config.format == "csv"


def test_config_file_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("frobnicate = 1\n")
    result = invoke(["equilibrium", "--config", str(cfg)])
    assert result.returncode == 1


def test_n_list_parsing():
    assert build_config(["sweep", "--n-list", "2:8:2"]).n_list == (2, 4, 6, 8)
    assert build_config(["sweep", "--n-list", "3,5,9"]).n_list == (3, 5, 9)


def test_sweep_parallel_matches_serial(tmp_path):
    args = ["sweep", "--n-list", "5:25:5", "--theta", "0.25", "--x", "1", "--y", "1",
            "--format", "csv"]
    import os
    serial_env = {**os.environ, "IMPACT_GAME_THREADS": "1"}
    parallel_env = {**os.environ, "IMPACT_GAME_THREADS": "4"}
    serial = invoke(args, env=serial_env)
    parallel = invoke(args, env=parallel_env)
    assert serial.returncode == parallel.returncode == 0
    assert serial.stdout == parallel.stdout


def test_limits_and_continuous_and_tax_commands():
    result = invoke(["limits", "--rho", "1", "--x", "1", "--y", "1", "--format", "csv"])
    assert result.returncode == 0
    assert result.stdout.startswith("quantity,value")
    result = invoke(["limits", "--curve-points", "5", "--format", "csv"])
    assert result.returncode == 0
    assert result.stdout.startswith("t,v_limit,w_limit")
    assert len(result.stdout.strip().split("\n")) == 6
    result = invoke(["continuous", "--rho", "1", "--x", "1", "--y", "0", "--theta", "0.25"])
    assert result.returncode == 0
    assert "foc_max_abs_deviation" in result.stdout
    result = invoke(["tax", "--n-list", "4,8", "--theta", "0.25", "--x", "1", "--y", "0.5"])
    assert result.returncode == 0
    assert result.stdout.startswith("N,tax_revenue,taxation_cost")


def test_verify_small_grid_passes():
    result = invoke(["verify", "--grid", "small"])
    assert result.returncode == 0
    assert "all verification checks passed" in result.stdout
    assert "FAIL" not in result.stdout
