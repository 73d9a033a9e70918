import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from huygens.cli import main, parse_grid, read_trajectory_csv
from huygens.errors import ConfigError

TD_ARGS = ["--model", "three-dof", "--mu", "0.0133", "--a", "5", "--sigma", "0.1",
           "--omega2", "0", "--gamma", "0.122"]


def run(argv, out):
    return main(argv + ["--out", str(out)])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_simulate_writes_csv_and_metadata(tmp_path):
    assert run(["simulate"] + TD_ARGS + ["--cycles", "5", "--theta2-0", "-0.3"], tmp_path) == 0
    header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,theta1,dtheta1,theta2,dtheta2,y,dy"
    meta = json.loads((tmp_path / "trajectory.json").read_text())
    assert meta["model"] == "ThreeDofSigma"
    tr = read_trajectory_csv(tmp_path / "trajectory.csv")
    assert tr.times[-1] == pytest.approx(5 * 2 * math.pi)


def test_zero_initial_state_gives_zero_trajectory(tmp_path):
    assert run(["simulate"] + TD_ARGS + ["--cycles", "3", "--theta1-0", "0",
                                         "--theta2-0", "0"], tmp_path) == 0
    data = np.loadtxt(tmp_path / "trajectory.csv", delimiter=",", skiprows=1)
    assert np.all(data[:, 1:] == 0)


def test_simulate_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["simulate"] + TD_ARGS + ["--cycles", "20"], d) == 0
    for name in ("trajectory.csv", "trajectory.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("HUYGENS_OUT", str(tmp_path / "env"))
    assert main(["simulate"] + TD_ARGS + ["--cycles", "1"]) == 0
    assert (tmp_path / "env" / "trajectory.csv").exists()


@pytest.mark.parametrize("argv", [
    ["simulate", "--model", "nonsense"],
    ["simulate", "--model", "three-dof", "--mu", "-1", "--a", "1", "--sigma", "0.1",
     "--omega2", "0", "--gamma", "0.1"],
    ["sweep", "--grid", "sigma:0:1"],
    ["sweep", "--grid", "layer:0:1:3"],
    ["reproduce", "--figure", "fig9"],
    ["reproduce"],
    ["predict", "--model", "dimensionless"],
    ["frobnicate"],
])
def test_config_errors_exit_1(argv, tmp_path):
    assert run(argv, tmp_path) == 1


def test_bad_config_file_exits_1(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("sigma = 0.1\nbogus = 3\n")
    assert run(["simulate", "--config", str(cfg)], tmp_path) == 1


def test_config_file_is_used(tmp_path):
    cfg = tmp_path / "td.cfg"
    cfg.write_text("# three-dof example\nmu = 0.0133\na = 5\nsigma = 0.1\nomega2 = 0\ngamma = 0.122\n")
    assert run(["predict", "--model", "three-dof", "--config", str(cfg)], tmp_path) == 0
    rep = json.loads((tmp_path / "prediction.json").read_text())
    assert rep["params"]["gamma"] == 0.122


def test_numeric_failure_exits_2(tmp_path):
    argv = ["simulate", "--model", "dimensionless", "--sigma", "0.1", "--omega2", "0.1",
            "--beta", "0.01", "--gamma", "0.1", "--epsilon", "1e5", "--theta1-0", "1e100",
            "--cycles", "1"]
    assert run(argv, tmp_path) == 2


def test_predict_anti_phase_amplitude(tmp_path, capsys):
    assert run(["predict"] + TD_ARGS, tmp_path) == 0
    rep = json.loads(capsys.readouterr().out)
    anti = rep["regimes"][1]
    assert anti["regime"] == "AntiPhase"
    assert anti["closed_form"]["amplitude"] == pytest.approx(0.244)
    assert anti["engine"]["amplitude"] == pytest.approx(0.244, rel=1e-10)
    assert anti["agree"] is True


def test_predict_in_phase_absent_in_both_columns(tmp_path, capsys):
    argv = ["predict", "--model", "three-dof", "--mu", "0.01", "--a", "1", "--sigma", "0.5",
            "--omega2", "0", "--gamma", "0.5"]
    assert run(argv, tmp_path) == 0
    inp = json.loads(capsys.readouterr().out)["regimes"][0]
    assert inp["closed_form"]["exists"] is False
    assert inp["engine"]["exists"] is False
    assert inp["agree"] is True


def test_empty_grid(tmp_path):
    assert run(["sweep"] + TD_ARGS + ["--grid", "sigma:0.01:1:0"], tmp_path) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 1 and lines[0].startswith("index,sigma,sigma_tilde")


def test_parse_grid():
    axis, grid = parse_grid("sigma:0:1:5")
    assert axis == "sigma"
    np.testing.assert_allclose(grid, [0, 0.25, 0.5, 0.75, 1])
    with pytest.raises(ConfigError):
        parse_grid("sigma:0:inf:5")


def test_sweep_flips_once_and_is_worker_independent(tmp_path):
    """a = 5, gamma = 0.5, Omega = 0: sigma_tilde = sigma/(5(1 + sigma^2)) peaks at 0.1 (sigma = 1),
    crossing the stability threshold 0.02778 once on (0.01, 0.5) but never the existence bound."""
    argv = ["sweep", "--model", "three-dof", "--mu", "0.01", "--a", "5", "--omega2", "0",
            "--gamma", "0.5", "--grid", "sigma:0.01:0.5:25"]
    serial, parallel = tmp_path / "s", tmp_path / "p"
    assert run(argv + ["--workers", "1"], serial) == 0
    assert run(argv + ["--workers", "3"], parallel) == 0
    assert (serial / "sweep.csv").read_bytes() == (parallel / "sweep.csv").read_bytes()
    rows = read_csv(serial / "sweep.csv")
    stable = [r["in_eng_stable"] for r in rows]
    assert sum(a != b for a, b in zip(stable, stable[1:])) == 1
    assert stable[0] == "true" and stable[-1] == "false"
    assert all(r["in_cf_exists"] == "true" for r in rows)


def test_sweep_existence_flips_once(tmp_path):
    argv = ["sweep", "--model", "three-dof", "--mu", "0.01", "--a", "1", "--omega2", "0",
            "--gamma", "0.5", "--grid", "sigma:0.01:0.6:30"]
    assert run(argv, tmp_path) == 0
    rows = read_csv(tmp_path / "sweep.csv")
    for col in ("in_cf_exists", "in_eng_exists"):
        ex = [r[col] for r in rows]
        assert sum(a != b for a, b in zip(ex, ex[1:])) == 1
    assert all(r["in_agree"] == "true" and r["anti_agree"] == "true" for r in rows)


def test_sweep_with_simulation(tmp_path):
    argv = ["sweep"] + TD_ARGS[:-4] + ["--omega2", "0", "--gamma", "0.122", "--grid",
                                       "sigma:0.1:0.2:2", "--simulate", "--cycles", "400",
                                       "--theta1-0", "0.1", "--theta2-0", "-0.3"]
    assert run(argv, tmp_path) == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert [r["sim_regime"] for r in rows] == ["AntiPhase", "AntiPhase"]
    assert rows[0]["error"] == ""


def test_analyze_round_trip(tmp_path, capsys):
    assert run(["simulate"] + TD_ARGS + ["--cycles", "600", "--theta2-0", "-0.3"], tmp_path) == 0
    capsys.readouterr()
    assert run(["analyze", str(tmp_path / "trajectory.csv")], tmp_path) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["regime"] == "AntiPhase"
    assert json.loads((tmp_path / "report.json").read_text()) == rep


def test_analyze_short_trajectory_exits_1(tmp_path):
    assert run(["simulate"] + TD_ARGS + ["--cycles", "3"], tmp_path) == 0
    assert run(["analyze", str(tmp_path / "trajectory.csv")], tmp_path) == 1


@pytest.mark.parametrize("fig,regime,beats", [
    ("fig3", "InPhase", None), ("fig6", "AntiPhase", True), ("fig7", "InPhase", None)])
def test_reproduce(fig, regime, beats, tmp_path):
    assert run(["reproduce", "--figure", fig], tmp_path) == 0
    rep = json.loads((tmp_path / f"{fig}_report.json").read_text())["report"]
    assert rep["regime"] == regime
    if beats is not None:
        assert rep["beats"] is beats
    svg = (tmp_path / f"{fig}.svg").read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert (tmp_path / f"{fig}.csv").exists()


def test_reproduce_is_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run(["reproduce", "--figure", "fig5"], tmp_path / d) == 0
    for name in ("fig5.csv", "fig5_report.json", "fig5.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "huygens.cli", "predict"] + TD_ARGS
                          + ["--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["model"] == "ThreeDofSigma"
