import json

import pytest

from slowsol.cli import load_config, main
from slowsol.errors import ConfigError

HAU_ARGS = ["--omega0", "3.528e7", "--tp", "2.5e-6", "--gamma", "6.3e7"]


def small_config_dict(name="cli"):
    return {
        "name": name,
        "medium": {"nu0": 8.0, "gamma": 0.1, "delta": 0.0, "eps0": 1.0},
        "schedule": {"kind": "constant", "p0": 1.0},
        "zeta0_ws": 1.0,
        "initial_atoms": "soliton",
        "grid": {"n_zeta": 64, "n_tau": 256, "zeta_max_ws": 3.0,
                 "tau_max_s": 8.0},
        "ratio_tau_s": 4.0,
        "distance_tau_s": 6.0,
        "emit": {"snapshot_taus_s": [4.0], "trajectory_points": 33,
                 "grids": True},
    }


class TestCalibrateCommand:
    def test_success_json(self, capsys):
        assert main(["calibrate", *HAU_ARGS]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["p0"] == pytest.approx(18.366224321, rel=1e-6)
        assert payload["eps0"] == pytest.approx(3.5644065573e8, rel=1e-6)
        assert payload["validity_ok"] is True
        assert payload["residuals"]["bg_field"] <= 1e-10
        assert payload["residuals"]["time_width"] <= 1e-10

    def test_missing_flag_exits_1(self):
        with pytest.raises(SystemExit) as info:
            main(["calibrate", "--omega0", "1.0", "--gamma", "6.3e7"])
        assert info.value.code == 1

    def test_zero_omega0_exits_2(self, capsys):
        assert main(["calibrate", "--omega0", "0", "--tp", "2.5e-6",
                     "--gamma", "6.3e7"]) == 2
        assert "omega0" in capsys.readouterr().err


class TestRunCommand:
    def test_run_and_compare(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(small_config_dict()))
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg_path), "--out", str(out)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["summary"]["decay_ratio"] < 1.0
        assert (out / "trajectory.csv").exists()

        assert main(["compare", "--run-dir", str(out)]) == 0
        verdict = json.loads(capsys.readouterr().out)
        assert verdict["verified"] is True

    def test_compare_detects_mismatch(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(small_config_dict(name="bad")))
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg_path), "--out", str(out)]) == 0
        capsys.readouterr()
        report = json.loads((out / "report.json").read_text())
        report["summary"]["decay_ratio"] += 1e-3
        (out / "report.json").write_text(json.dumps(report))
        assert main(["compare", "--run-dir", str(out)]) == 2
        assert "MISMATCH" in capsys.readouterr().err

    def test_missing_config_exits_1(self, capsys):
        assert main(["run", "--config", "no-such-config"]) == 1
        assert "no-such-config" in capsys.readouterr().err

    def test_invalid_config_exits_1(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"name": "x"}))
        assert main(["run", "--config", str(cfg_path)]) == 1

    def test_compare_missing_dir_exits_1(self, tmp_path):
        assert main(["compare", "--run-dir", str(tmp_path / "nope")]) == 1

    def test_diverged_run_exits_2(self, tmp_path, capsys):
        cfg = {
            "name": "blowup",
            "medium": {"nu0": 8e6, "gamma": 0.0, "delta": 0.0, "eps0": 1.0},
            "schedule": {"kind": "constant", "p0": 0.5},
            "zeta0_ws": 0.0,
            "grid": {"n_zeta": 16, "n_tau": 64, "zeta_max_ws": 2000.0,
                     "tau_max_s": 10.0},
            "scheme": {"max_bisections": 0},
            "ratio_tau_s": 5.0, "distance_tau_s": 8.0,
            "emit": {"snapshot_taus_s": [], "trajectory_points": 17,
                     "grids": False},
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        assert main(["run", "--config", str(cfg_path),
                     "--out", str(tmp_path / "out")]) == 2
        assert "exceeded" in capsys.readouterr().err


class TestSweepCommand:
    def test_sweep(self, tmp_path, capsys):
        base = small_config_dict(name="base")
        base["simulate"] = False
        sweep = {"base": base,
                 "runs": [{"name": "r1", "overrides": {}},
                          {"name": "r2",
                           "overrides": {"medium": {"gamma": 0.3}}}]}
        sweep_path = tmp_path / "sweep.json"
        sweep_path.write_text(json.dumps(sweep))
        out = tmp_path / "sweep-out"
        assert main(["sweep", "--config", str(sweep_path), "--out", str(out)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert len(summary["runs"]) == 2
        assert (out / "summary.json").exists()


class TestPresets:
    def test_bundled_hau1999_loads(self):
        cfg = load_config("hau1999")
        assert cfg.name == "hau1999"
        assert cfg.experiment["gamma"] == 6.3e7
        assert cfg.experiment["distance_anchor"]["distance_m"] == 2.0e-4

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            load_config("not-a-preset")
