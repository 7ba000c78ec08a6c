import csv
import json

import pytest

from splitqpe.cli import BuildConfig, ScanCommandConfig, SimulateConfig, VerifyConfig, load_config, parse_overrides
from splitqpe.cli.main import EXIT_ACCEPTANCE, EXIT_INVALID, EXIT_OK, build_parser, main
from splitqpe.cli.verify import CHECKS, list_checks, run_checks, verify
from splitqpe.const import OUTPUT_DIR_ENV
from splitqpe.errors import AcceptanceError, ConfigError
from splitqpe.resources import synthetic_dfspec


class TestConfig:
    def test_overrides(self):
        assert parse_overrides(["--m", "6", "--tau=8", "--measure-reset"]) == \
            {"m": "6", "tau": "8", "measure_reset": "true"}
        assert parse_overrides(["--theta=-0.3", "--beta2", "-0.1"]) == {"theta": "-0.3", "beta2": "-0.1"}
        with pytest.raises(ConfigError):
            parse_overrides(["m", "6"])

    def test_load_with_file_and_overrides(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"method": "qpe", "m": 4, "tau": 8}))
        cfg = load_config(BuildConfig, str(path), {"m": "6", "cat": "yes", "theta": "none"})
        assert (cfg.method, cfg.m, cfg.tau, cfg.cat, cfg.theta) == ("qpe", 6, 8.0, True, None)
        assert cfg.run().m == 6

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            load_config(BuildConfig, None, {"shots": "10"})

    @pytest.mark.parametrize("key,value", [("m", "six"), ("m", "6.5"), ("cat", "maybe")])
    def test_bad_values(self, key, value):
        with pytest.raises(ConfigError):
            load_config(SimulateConfig, None, {key: value})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(BuildConfig, str(tmp_path / "absent.json"))

    def test_scan_values(self):
        assert ScanCommandConfig(n_values="4, 6,8").n_list() == [4, 6, 8]
        with pytest.raises(ConfigError):
            ScanCommandConfig(n_values="four").n_list()

    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "env"))
        assert BuildConfig().output_dir() == str(tmp_path / "env")
        assert BuildConfig(out_dir=str(tmp_path / "own")).output_dir() == str(tmp_path / "own")

    @pytest.mark.parametrize("overrides", [{"p2": "0.01"}, {"pm": "0.01", "shots": "0"}, {"shots": "-1"}])
    def test_noise_needs_shots(self, overrides):
        with pytest.raises(ConfigError):
            load_config(SimulateConfig, None, overrides)
        assert not SimulateConfig().sampled
        assert SimulateConfig(shots=1, p2=0.01).sampled

    def test_only_ids(self):
        assert VerifyConfig(only="a, b").only_ids() == ["a", "b"]
        assert VerifyConfig().only_ids() is None


class TestCommands:
    def test_build(self, tmp_path, capsys):
        assert main(["build", "--m", "3", "--cat", "--out-dir", str(tmp_path)]) == EXIT_OK
        report = json.loads((tmp_path / "metrics.json").read_text())
        assert report["layout"]["qubits"] == 2 * 4 + 3 + 3
        assert report["census"]["CSWAP"] == 3 * 8
        assert (tmp_path / "circuit.txt").exists()
        assert "cx_count" in capsys.readouterr().out

    def test_simulate_exact(self, tmp_path):
        assert main(["simulate", "--out-dir", str(tmp_path)]) == EXIT_OK
        stats = json.loads((tmp_path / "stats.json").read_text())
        assert stats["modal"] == 12 and stats["modal_bits"] == "01100"
        assert stats["energy"] == pytest.approx(-0.235619, abs=1e-6)
        assert stats["shots"] == 0
        with open(tmp_path / "distribution.csv") as f:
            assert len(list(csv.DictReader(f))) == 32

    def test_simulate_sampled_into_env_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        code = main(["simulate", "--m", "3", "--cat", "--measure-reset", "--shots", "100", "--seed", "2",
                     "--p2", "0.01", "--pm", "0.01"])
        assert code == EXIT_OK
        stats = json.loads((tmp_path / "stats.json").read_text())
        assert stats["shots"] == 100
        assert len(stats["ed_round_failure"]) == 3
        assert len((tmp_path / "shots.csv").read_text().splitlines()) == 101

    def test_scan_dfspec(self, tmp_path):
        path = tmp_path / "df.json"
        synthetic_dfspec(6, 4, seed=3).save(str(path))
        assert main(["scan", "--dfspec", str(path), "--out-dir", str(tmp_path)]) == EXIT_OK
        report = json.loads((tmp_path / "scan.json").read_text())
        assert report["n"] == 6 and set(report["totals"]) == {"QPE", "SE-QPE"}

    def test_scan_sweep(self, tmp_path):
        assert main(["scan", "--n-values", "4,6", "--swap", "serial", "--out-dir", str(tmp_path)]) == EXIT_OK
        with open(tmp_path / "scan.csv") as f:
            rows = list(csv.DictReader(f))
        assert [(r["N"], r["method"]) for r in rows] == [("4", "QPE"), ("4", "SE-QPE"), ("6", "QPE"), ("6", "SE-QPE")]

    def test_simulate_noise_without_shots(self, tmp_path, capsys):
        assert main(["simulate", "--p2", "0.01", "--out-dir", str(tmp_path)]) == EXIT_INVALID
        assert "shots" in capsys.readouterr().err
        assert not (tmp_path / "stats.json").exists()

    @pytest.mark.parametrize("argv,level", [
        (["build"], "WARNING"),
        (["--log-level", "DEBUG", "build"], "DEBUG"),
        (["build", "--log-level", "INFO"], "INFO"),
        (["--log-level", "DEBUG", "build", "--log-level", "ERROR"], "ERROR"),
    ])
    def test_log_level_either_side(self, argv, level):
        args, rest = build_parser().parse_known_args(argv)
        assert args.log_level == level and rest == []

    def test_log_level_after_command(self, tmp_path):
        assert main(["build", "--log-level", "INFO", "--m", "3", "--out-dir", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "metrics.json").exists()

    def test_invalid_policy(self, tmp_path, capsys):
        assert main(["build", "--policy", "", "--out-dir", str(tmp_path)]) == EXIT_INVALID
        assert "error:" in capsys.readouterr().err

    def test_unknown_override(self):
        assert main(["build", "--shots", "5"]) == EXIT_INVALID


class TestVerify:
    def test_list(self, capsys):
        assert main(["verify", "--list"]) == EXIT_OK
        out = capsys.readouterr().out
        for check_id, _ in list_checks():
            assert check_id in out

    def test_registry(self):
        assert {"ground-energies", "substitution-equivalence", "determinism"} <= set(CHECKS)

    def test_passing_checks(self):
        results = run_checks(VerifyConfig(quick=True), ["ground-energies", "lambda-correction", "trotter-constant"])
        assert [r.passed for r in results] == [True, True, True]

    def test_perturbed_model_fails(self, capsys):
        code = main(["verify", "--only", "ground-energies", "--beta2", "0.2"])
        assert code == EXIT_ACCEPTANCE
        assert "FAIL" in capsys.readouterr().out
        with pytest.raises(AcceptanceError) as info:
            verify(VerifyConfig(beta2=0.2, only="ground-energies"))
        assert info.value.failed == ["ground-energies"]

    def test_unknown_check(self):
        assert main(["verify", "--only", "no-such-check"]) == EXIT_INVALID

    def test_determinism_check(self):
        result, = run_checks(VerifyConfig(quick=True), ["determinism"])
        assert result.passed, result.detail

    @pytest.mark.slow
    def test_full_suite(self):
        assert all(r.passed for r in verify(VerifyConfig()))
