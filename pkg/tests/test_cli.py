import json

import pytest

from specdens.cli import main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_example(capsys):
    code, out, _ = run(capsys, "moments", "--weight", "hermite", "--N", "100", "--kmax", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,k,finite,limit,abs_error"
    assert "100,2,0.25,0.25,0.0" in lines


def test_density_example(capsys):
    code, out, _ = run(capsys, "density", "--weight", "hermite", "--N", "200", "--grid", "512")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,sigma,sigma_limit"
    row = next(l for l in lines[1:] if l.startswith("0.0,"))
    assert float(row.split(",")[2]) == pytest.approx(0.6366198, abs=1e-7)
    assert all(float(v) >= 0 for l in lines[1:] for v in l.split(",")[1:])


def test_validate_example(capsys):
    code, out, _ = run(capsys, "validate", "--weight", "laguerre", "--alpha", "0")
    assert code == 0
    assert "hankel: PASS (n<=6)" in out.splitlines()


def test_validate_failure_exit_code(capsys):
    code, out, _ = run(capsys, "validate", "--lambda", "0.3", "--b", "0.5", "--tol", "1e-20")
    assert code == 2 and "normalization: FAIL" in out


def test_converge_and_perturb(capsys):
    code, out, _ = run(capsys, "converge", "--weight", "jacobi", "--N-list", "25,50,100", "--kmax", "4")
    assert code == 0 and out.count("\n") == 1 + 3 * 5
    code, out, _ = run(capsys, "perturb", "--weight", "hermite", "--p", "0,1", "--N-list", "10,20", "--kmax", "2")
    assert code == 0
    row = next(l for l in out.splitlines() if l.startswith("10,2,")).split(",")
    assert float(row[2]) == pytest.approx(0.3, abs=1e-14) and float(row[4]) == pytest.approx(0.05, abs=1e-14)


def test_ode_check(capsys):
    code, out, err = run(capsys, "ode-check", "--lambda", "0.3", "--b", "0.5", "--grid", "21")
    assert code == 0 and "PASS" in err
    assert out.splitlines()[0] == "x,sigma_limit,residual"


def test_usage_errors(capsys):
    assert run(capsys, "moments", "--kmax", "40")[0] == 1
    assert run(capsys, "nosuch")[0] == 1
    assert run(capsys, "moments", "--N", "0")[0] == 1
    assert run(capsys, "perturb")[0] == 1
    assert run(capsys, "perturb", "--p", "1,0")[0] == 1
    assert run(capsys, "moments", "--config", "/nonexistent/job.json")[0] == 1


def test_numerical_failure_exit_code(capsys):
    code, _, err = run(capsys, "validate", "--lambda", "-1")
    assert code == 3 and "numerical failure" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"command": "moments", "weight": {"family": "laguerre", "alpha": 0},
                               "N": 50, "k_max": 2}))
    code, out, _ = run(capsys, "moments", "--config", str(cfg))
    assert code == 0 and "50,1,0.5,0.5,0.0" in out
    code, out, _ = run(capsys, "moments", "--config", str(cfg), "--N", "20")
    assert code == 0 and "20,1,0.5,0.5,0.0" in out
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "moments", "--config", str(bad))[0] == 1
    assert run(capsys, "density", "--config", str(cfg))[0] == 1


def test_output_file_deterministic_and_json(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "density", "--weight", "laguerre", "--N", "40", "--grid", "64", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".specdens-")]
    j = tmp_path / "m.json"
    assert run(capsys, "moments", "--N", "10", "--kmax", "2", "--format", "json", "--out", str(j))[0] == 0
    data = json.loads(j.read_text())
    assert data["rows"][2] == {"N": 10, "k": 2, "finite": 0.25, "limit": 0.25, "abs_error": 0.0}
