import json

import pytest

from dynsim.cli import main


def test_scara_csv_header(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["scara", "--out", str(out)]) == 0
    lines = out.read_text().split("\n")
    assert lines[0] == "t,q1,q2,q3,q4,dq1,dq2,dq3,dq4"
    assert len(lines) > 10
    # Every row parses as floats.
    for line in lines[1:-1]:
        [float(v) for v in line.split(",")]


def test_csv_goes_to_stdout_without_out_flag(capsysbinary):
    assert main(["pendulum", "--tf", "0.5"]) == 0
    data = capsysbinary.readouterr().out
    assert data.startswith(b"t,theta0,theta1,dtheta0,dtheta1\n")


def test_identical_invocations_are_byte_identical(tmp_path):
    pairs = []
    for name in ("a", "b"):
        csv = tmp_path / f"{name}.csv"
        svg = tmp_path / f"{name}.svg"
        assert main(["scara", "--tf", "2", "--out", str(csv), "--plot", str(svg)]) == 0
        pairs.append((csv.read_bytes(), svg.read_bytes()))
    assert pairs[0] == pairs[1]


def test_flag_overrides_via_dump_scenario(capsys):
    assert main(["scara", "--tau", "1,2,3,4", "--tf", "7.5", "--rtol", "1e-5",
                 "--dump-scenario"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["torque"]["values"] == [[1.0, 2.0, 3.0, 4.0]]
    assert data["tf"] == 7.5
    assert data["solver_options"]["rtol"] == 1e-5
    assert data["solver_options"]["atol"] == 1e-6


def test_pendulum_flags(capsys):
    assert main(["pendulum", "--tau", "0.25", "--theta1", "3.04",
                 "--dump-scenario"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["torque"]["values"] == [[0.25]]
    assert data["initial_state"]["q"] == [0.0, 3.04]
    assert data["tf"] == 5.0


def test_dump_scenario_roundtrips_through_run(tmp_path, capsys):
    assert main(["pendulum", "--theta1", "0.5", "--tf", "1",
                 "--dump-scenario"]) == 0
    dumped = capsys.readouterr().out
    path = tmp_path / "scenario.json"
    path.write_text(dumped)
    out = tmp_path / "run.csv"
    assert main(["run", str(path), "--out", str(out)]) == 0
    header = out.read_text().split("\n")[0]
    assert header == "t,theta0,theta1,dtheta0,dtheta1"


def test_run_missing_file(tmp_path, capsys):
    missing = tmp_path / "missing.json"
    assert main(["run", str(missing)]) == 2
    assert "missing.json" in capsys.readouterr().err


def test_run_rejects_bad_schema(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"model": "scara", "speeed": 3}))
    assert main(["run", str(path)]) == 2
    assert "speeed" in capsys.readouterr().err


def test_run_rejects_invalid_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["run", str(path)]) == 2
    assert "JSON" in capsys.readouterr().err


def test_bad_tau_is_usage_error(capsys):
    assert main(["scara", "--tau", "1,2", "--dump-scenario"]) == 2
    assert "--tau" in capsys.readouterr().err


def test_runtime_failure_maps_to_exit_3(tmp_path, capsys):
    path = tmp_path / "hard.json"
    path.write_text(json.dumps({
        "model": "pendulum",
        "initial_state": {"q": [0.0, 3.0], "dq": [0.0, 0.0]},
        "tf": 5.0,
        "solver_options": {"rtol": 1e-10, "atol": 1e-12, "max_steps": 5},
    }))
    assert main(["run", str(path)]) == 3
    assert "step" in capsys.readouterr().err


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 6
    assert "6/6 checks passed" in out


def test_verify_json(capsys):
    assert main(["verify", "--json"]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) == 6
    for report in reports:
        assert set(report) == {"name", "residual", "threshold", "pass"}
        assert report["pass"] is True


def test_usage_error_without_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
