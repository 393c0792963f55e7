import json

import numpy as np
import pytest

from focklaser.cli import run
from focklaser.serialize import read_result


def invoke(args, capsys):
    code = run(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSpectrumCommand:
    def test_csv_structure(self, tmp_path, capsys):
        out = tmp_path / "spec.csv"
        code, _, _ = invoke(["spectrum", "--g", "10", "--n-max", "200",
                             "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        assert env.command == "spectrum"
        assert env.columns == ["n", "sigma", "energy", "gap"]
        assert env.config["g"] == 10
        assert len(env.rows) == 2 * 201

    def test_determinism_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert invoke(["spectrum", "--g", "3", "--n-max", "40",
                           "--out", str(path)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_when_no_out(self, capsys):
        code, out, _ = invoke(["spectrum", "--g", "1", "--n-max", "3"], capsys)
        assert code == 0
        assert out.startswith("# focklaser v")


class TestSteadyStateCommand:
    def test_headline_point(self, tmp_path, capsys):
        out = tmp_path / "ss.csv"
        code, _, err = invoke(
            ["steady-state", "--method", "rate", "--g", "10",
             "--epsilon", "1e-5", "--gamma", "1e-3", "--kappa", "1e-8",
             "--r", "1e-2", "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        probs = np.array([row[1] for row in env.rows])
        n = np.arange(probs.size)
        mean = float(n @ probs)
        assert 90 <= mean <= 110
        assert "mean=" in err

    def test_direct_method_matches_rate(self, tmp_path, capsys):
        a, b = tmp_path / "r.csv", tmp_path / "d.csv"
        # rate at the effective pump r_a = 5e-4 equals direct at r with
        # r*Gamma/(r+Gamma) = 5e-4
        assert invoke(["steady-state", "--method", "rate", "--g", "2",
                       "--r", "5e-4", "--out", str(a)], capsys)[0] == 0
        assert invoke(["steady-state", "--method", "direct", "--g", "2",
                       "--r", "5e-4", "--out", str(b)], capsys)[0] == 0
        pa = np.array([row[1] for row in read_result(a).rows])
        pb = np.array([row[1] for row in read_result(b).rows])
        m = max(pa.size, pb.size)
        pa = np.pad(pa, (0, m - pa.size))
        pb = np.pad(pb, (0, m - pb.size))
        assert 0.5 * np.abs(pa - pb).sum() < 1e-10

    def test_json_round_trip(self, tmp_path, capsys):
        out = tmp_path / "ss.json"
        code, _, _ = invoke(
            ["steady-state", "--method", "rate", "--g", "5", "--r", "1e-3",
             "--format", "json", "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        assert env.command == "steady-state"
        assert env.duration_s is not None
        assert abs(sum(row[1] for row in env.rows) - 1.0) < 1e-9


class TestOtherCommands:
    def test_blockade(self, tmp_path, capsys):
        out = tmp_path / "b.csv"
        code, _, _ = invoke(["blockade", "--g", "10", "--n-max", "120",
                             "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        probs = np.array([row[1] for row in env.rows])
        assert 85 <= int(probs.argmax()) <= 110

    def test_gain_loss(self, tmp_path, capsys):
        out = tmp_path / "gl.csv"
        code, _, _ = invoke(["gain-loss", "--g", "10", "--r", "1e-2",
                             "--n-max", "120", "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        assert env.columns == ["n", "gain", "loss", "F", "G"]

    def test_transient(self, tmp_path, capsys):
        out = tmp_path / "tr.csv"
        code, _, _ = invoke(
            ["transient", "--g", "1", "--epsilon", "2e-3", "--gamma", "2e-2",
             "--kappa", "2e-3", "--r", "0", "--rho0-fock", "3",
             "--t-final", "100", "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        probs = np.array([row[1] for row in env.rows])
        mean = float(np.arange(probs.size) @ probs)
        assert mean == pytest.approx(3 * np.exp(-0.2), rel=1e-5)

    def test_sweep_with_jobs_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "s1.csv", tmp_path / "s2.csv"
        args = ["sweep", "--method", "rate", "--g", "0,5", "--epsilon", "1e-5",
                "--gamma", "1e-3", "--kappa", "2e-7",
                "--r-log", "1e-4..1e-2:5"]
        assert invoke(args + ["--jobs", "1", "--out", str(a)], capsys)[0] == 0
        assert invoke(args + ["--jobs", "2", "--out", str(b)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()
        env = read_result(a)
        assert len(env.rows) == 10

    def test_regime_map(self, tmp_path, capsys):
        out = tmp_path / "rm.csv"
        code, _, _ = invoke(
            ["regime-map", "--g", "10", "--epsilon", "1e-5", "--kappa", "1e-8",
             "--r-log", "5e-6..5e-3:3", "--gamma-log", "1e-3..1e-3:1",
             "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        classes = [row[2] for row in env.rows]
        assert classes[0] == "thermal"
        assert classes[-1] == "fock-like"

    def test_liouvillian_method(self, tmp_path, capsys):
        out = tmp_path / "lv.csv"
        code, _, _ = invoke(
            ["steady-state", "--method", "liouvillian", "--g", "2",
             "--n-fock", "30", "--r", "1e-2", "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        assert env.config["n_fock"] == 30
        probs = np.array([row[1] for row in env.rows])
        assert abs(probs.sum() - 1.0) < 1e-9


class TestConfigAndErrors:
    def test_validation_exit_code(self, capsys):
        code, _, err = invoke(["spectrum", "--g", "-1", "--n-max", "5"], capsys)
        assert code == 2
        assert "g must be >= 0" in err

    def test_numerical_failure_exit_code(self, capsys):
        # explicit grid too small for the headline point: tail-mass failure
        code, _, err = invoke(
            ["steady-state", "--method", "rate", "--g", "10", "--r", "1e-2",
             "--n-max", "30"], capsys)
        assert code == 1
        assert "tail mass" in err

    def test_config_file_defaults_and_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"g": "7", "n_max": 11}))
        out = tmp_path / "o.csv"
        code, _, _ = invoke(["spectrum", "--config", str(cfg),
                             "--out", str(out)], capsys)
        assert code == 0
        env = read_result(out)
        assert env.config["g"] == 7
        assert env.config["n_max"] == 11
        # flags override the file
        code, _, _ = invoke(["spectrum", "--config", str(cfg), "--g", "3",
                             "--out", str(out)], capsys)
        assert read_result(out).config["g"] == 3

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"nonsense": 1}))
        code, _, err = invoke(["spectrum", "--config", str(cfg)], capsys)
        assert code == 2
        assert "unknown keys" in err
