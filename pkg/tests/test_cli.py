import json

import numpy as np
import pytest

from onedatom.cli import RunConfig, main, parse_config, render_table
from onedatom.experiments import SweepResult


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_transient_dashed_curve_config():
    cfg = parse_config(["transient", "--p", "30", "--gamma-star", "10"])
    params = cfg.two_level()
    assert (params.p, params.gamma_star, params.beta, params.xi) == (30.0, 10.0, 1.0, 0.0)


def test_steady_sweep_defaults():
    cfg = parse_config(["steady-sweep"])
    assert cfg.two_level().xi == 3.0
    grid = cfg.power_grid()
    assert (grid.p_min, grid.p_max, grid.n_points) == (1e-2, 1e4, 121)


def test_qd_sweep_defaults():
    params = parse_config(["qd-sweep"]).three_level()
    assert (params.g2, params.gamma_XX, params.beta, params.gamma_star) == (4.0, 2.0, 1.0, 0.0)


def test_invalid_beta_exit_code(capsys):
    code, _, err = run_cli(["steady-sweep", "--beta", "1.5"], capsys)
    assert code == 2
    assert "beta out of [0,1]" in err


def test_unknown_flag_exit_code(capsys):
    code, _, _ = run_cli(["transient", "--g2", "3"], capsys)
    assert code == 2


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"xi": 3, "colour": "red"}))
    code, _, err = run_cli(["steady-sweep", "--config", str(path)], capsys)
    assert code == 2
    assert "colour" in err


def test_malformed_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    code, _, err = run_cli(["steady-sweep", "--config", str(path)], capsys)
    assert code == 2
    assert "malformed" in err


def test_invalid_config_value_names_key(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"points": "many"}))
    code, _, err = run_cli(["steady-sweep", "--config", str(path)], capsys)
    assert code == 2
    assert "points" in err


def test_flags_override_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"xi": 15, "points": 5}))
    cfg = parse_config(["steady-sweep", "--config", str(path), "--xi", "7"])
    assert cfg.values["xi"] == 7.0
    assert cfg.values["points"] == 5


def test_config_round_trip(tmp_path):
    cfg = parse_config(["qd-sweep", "--g2", "50", "--points", "11", "--format", "json", "--out", "x.json"])
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    again = parse_config(["qd-sweep", "--config", str(path)])
    assert again == cfg


def test_config_for_other_experiment_rejected(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(RunConfig("transient", {"p": 1.0}).to_json())
    code, _, err = run_cli(["steady-sweep", "--config", str(path)], capsys)
    assert code == 2


@pytest.mark.parametrize(
    "args, header",
    [
        (["transient", "--t-max", "1"], "t,re_sm,im_sm,sz,pe,T,R,S,netT,N,W"),
        (["steady-sweep", "--points", "5"], "p,pe,N,betaR,betaT,W"),
        (["qd-sweep", "--points", "5"], "p,Pg,PX,PXX,N3L,betaR3L,betaR2L"),
        (["threshold", "--xi", "15"], "gamma,beta,gamma_star,xi,p_th"),
    ],
)
def test_csv_headers(args, header, capsys):
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    assert out.splitlines()[0] == header


def test_threshold_value(capsys):
    _, out, _ = run_cli(["threshold", "--xi", "15"], capsys)
    assert out.splitlines()[1].split(",")[-1] == "64"


def test_threshold_without_coupling(capsys):
    code, _, err = run_cli(["threshold", "--beta", "0"], capsys)
    assert code == 2
    assert "no 1D coupling" in err


def test_validate_subcommand(capsys):
    assert run_cli(["validate"], capsys)[:2] == (0, "ok\n")
    code, _, err = run_cli(["validate", "--p", "-1"], capsys)
    assert code == 2 and "negative probe power" in err


def test_unwritable_path(tmp_path, capsys):
    code, _, _ = run_cli(["threshold", "--out", str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 3


def test_single_step_grid_is_a_config_error(capsys):
    code, _, err = run_cli(["transient", "--p", "30", "--steps", "1"], capsys)
    assert code == 2
    assert "n_steps" in err


def test_solver_error_exit_code(monkeypatch, capsys):
    from onedatom import experiments
    from onedatom.errors import NoSteadyStateError

    def broken(*args, **kwargs):
        raise NoSteadyStateError("no unique steady state")

    monkeypatch.setattr(experiments, "run_qd_sweep", broken)
    code, _, err = run_cli(["qd-sweep"], capsys)
    assert code == 4
    assert "no unique steady state" in err


def test_seventeen_significant_digits():
    table = SweepResult(("a", "b"), np.array([[1 / 3, float("nan")]]))
    assert render_table(table, "csv") == "a,b\n0.33333333333333331,nan\n"
    assert render_table(table, "json") == '{\n  "a": [0.33333333333333331],\n  "b": [null]\n}\n'


def test_json_output_mirrors_columns(tmp_path):
    path = tmp_path / "out.json"
    assert main(["steady-sweep", "--points", "3", "--format", "json", "--out", str(path)]) == 0
    data = json.loads(path.read_text())
    assert list(data) == ["p", "pe", "N", "betaR", "betaT", "W"]
    assert data["pe"][0] == 0.75
    assert len(data["p"]) == 4
