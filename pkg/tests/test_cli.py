import csv

import numpy as np
import pytest

from fkdv.cli import CONFIG_KEYS, ValidationError, cli_main, read_config


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_convergence_csv(tmp_path):
    rc = cli_main(["convergence", "--preset", "bo", "--scheme", "cn", "--alphas", "1.0",
                   "--Ns", "64,128", "--T", "10", "--output-dir", str(tmp_path)])
    assert rc == 0
    rows = _rows(tmp_path / "convergence.csv")
    assert ",".join(rows[0]) == "scheme,alpha,N,dx,dt,error,rate,C1,C2,C3,fp_iters,wall_s"
    assert [r[2] for r in rows[1:]] == ["64", "128"]
    assert (tmp_path / "convergence.txt").read_text().split()[0] == "scheme"


def test_convergence_is_byte_identical(tmp_path):
    args = ["convergence", "--preset", "bo", "--Ns", "32,64", "--T", "5"]
    assert cli_main(args + ["--output-dir", str(tmp_path / "a")]) == 0
    assert cli_main(args + ["--output-dir", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "convergence.csv").read_bytes()
    assert a == (tmp_path / "b" / "convergence.csv").read_bytes()


def test_run_snapshots(tmp_path):
    rc = cli_main(["run", "--preset", "kdv2", "--scheme", "cn", "--N", "250", "--T", "0.5",
                   "--output-dir", str(tmp_path)])
    assert rc == 0
    names = sorted(p.name for p in tmp_path.glob("u_t*.csv"))
    assert names == ["u_t0.000000.csv", "u_t0.500000.csv"]
    rows = _rows(tmp_path / names[-1])
    assert rows[0] == ["x", "u"] and len(rows) == 251


def test_consistency(tmp_path):
    rc = cli_main(["consistency", "--alpha", "1.5", "--Ns", "128,256", "--output-dir", str(tmp_path)])
    assert rc == 0
    rows = _rows(tmp_path / "consistency.csv")
    assert rows[0] == ["N", "dx", "error", "rate"]
    errs = [float(r[2]) for r in rows[1:]]
    assert errs[0] > errs[1]


def test_invariants(tmp_path):
    rc = cli_main(["invariants", "--preset", "bo", "--N", "64", "--T", "6",
                   "--snapshot-stride", "5", "--output-dir", str(tmp_path)])
    assert rc == 0
    rows = _rows(tmp_path / "invariants.csv")
    assert rows[0] == ["t", "C1", "C2", "C3"]
    assert float(rows[-1][0]) == 6.0
    assert abs(float(rows[-1][2]) - 1) < 1e-10


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# BO quick run\npreset = bo\nscheme = ei   # trailing comment\nN = 64\nT = 2\n"
        f"output_dir = {tmp_path / 'out'}\n"
    )
    assert read_config(cfg)["scheme"] == "ei"
    assert cli_main(["run", "--config", str(cfg), "--T", "1"]) == 0
    assert (tmp_path / "out" / "u_t1.000000.csv").exists()


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("preset = bo\nspeed = 3\n")
    with pytest.raises(ValidationError, match="speed"):
        read_config(cfg)
    assert cli_main(["run", "--config", str(cfg)]) == 1
    assert "speed" in capsys.readouterr().err


def test_config_keys_cover_interface():
    for key in ("preset", "scheme", "alpha", "N", "Ns", "domain_a", "domain_b", "mode", "T",
                "dt_policy", "dt", "delta", "L", "fp_tol", "fp_max_iters", "solver_tol",
                "solver_backend", "N_ref", "snapshot_stride", "output_dir"):
        assert key in CONFIG_KEYS


@pytest.mark.parametrize("argv", [
    ["run", "--N", "2"],
    ["run", "--bogus", "1"],
    ["run", "--scheme", "leapfrog"],
    ["run", "--alpha", "2.5"],
    ["run", "--N", "many"],
    ["frobnicate"],
    [],
])
def test_validation_errors_exit_one(argv, tmp_path):
    assert cli_main(argv + (["--output-dir", str(tmp_path)] if argv[:1] == ["run"] else [])) == 1


def test_numerical_failure_exits_two(tmp_path):
    argv = ["run", "--preset", "bo", "--N", "64", "--T", "10", "--dt-policy", "explicit_value",
            "--dt", "5", "--fp-max-iters", "2", "--output-dir", str(tmp_path)]
    assert cli_main(argv) == 2


def test_domain_override(tmp_path):
    rc = cli_main(["run", "--preset", "sine", "--alpha", "1.2", "--domain-a", "0",
                   "--domain-b", str(2 * np.pi), "--N", "32", "--T", "0.1",
                   "--output-dir", str(tmp_path)])
    assert rc == 0
    x = np.loadtxt(tmp_path / "u_t0.000000.csv", delimiter=",", skiprows=1)[:, 0]
    assert x[0] == 0 and x[-1] == pytest.approx(2 * np.pi * 31 / 32)
