import json

import pytest

from airsel import __version__
from airsel.cli import cli_main


SMALL_CONFIG = {
    "dims": {"n": 8, "k": 3},
    "snr_grid_db": [10.0],
    "l_grid": [2],
    "algorithms": ["greedy"],
    "trials": 2,
    "seed": 3,
}


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(SMALL_CONFIG))
    return str(path)


class TestVersion:
    def test_prints_version(self, capsys):
        assert cli_main(["version"]) == 0
        assert capsys.readouterr().out.strip() == __version__


class TestUsageErrors:
    def test_missing_config_for_sweep(self, capsys):
        assert cli_main(["sweep"]) == 1

    def test_unknown_flag(self, capsys):
        assert cli_main(["solve", "--bogus"]) == 1
        assert "--bogus" in capsys.readouterr().err

    def test_unknown_algorithm(self, capsys):
        assert cli_main(["solve", "--algo", "magic"]) == 1
        assert "magic" in capsys.readouterr().err

    def test_no_command(self, capsys):
        assert cli_main([]) == 1


class TestSweep:
    def test_writes_csv(self, config_path, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        assert cli_main(["sweep", "--config", config_path, "--out", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 1 + 2  # header + trials*algorithms
        assert lines[0].startswith("schema,")

    def test_thread_independence_bytes(self, config_path, tmp_path):
        out1 = tmp_path / "a.csv"
        out8 = tmp_path / "b.csv"
        assert (
            cli_main(
                ["sweep", "--config", config_path, "--out", str(out1),
                 "--threads", "1"]
            )
            == 0
        )
        assert (
            cli_main(
                ["sweep", "--config", config_path, "--out", str(out8),
                 "--threads", "8"]
            )
            == 0
        )
        assert out1.read_bytes() == out8.read_bytes()

    def test_missing_output_path(self, config_path, capsys):
        assert cli_main(["sweep", "--config", config_path]) == 1

    def test_invalid_config_validation_error(self, tmp_path, capsys):
        bad = dict(SMALL_CONFIG, l_grid=[99])
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        assert cli_main(["sweep", "--config", str(path), "--out", "x.csv"]) == 1


class TestSolve:
    def test_prints_report(self, config_path, capsys):
        assert cli_main(["solve", "--config", config_path, "--algo", "fista"]) == 0
        out = capsys.readouterr().out
        assert "error" in out and "selected" in out

    def test_runs_without_config(self, capsys, monkeypatch):
        # default config is N=128; trim via --algo greedy for speed
        assert cli_main(["solve", "--algo", "greedy", "--seed", "4"]) == 0


class TestOracleCheck:
    def test_passes_on_defaults(self, capsys):
        assert cli_main(["oracle-check", "--seed", "7", "--trials", "2"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out


class TestFlsim:
    def test_writes_round_csv(self, config_path, tmp_path, capsys):
        out = tmp_path / "fl.csv"
        path = tmp_path / "flcfg.json"
        cfg = dict(SMALL_CONFIG)
        cfg["flsim"] = {"rounds": 4, "dim": 3, "n_fl_devices": 3}
        path.write_text(json.dumps(cfg))
        assert cli_main(["flsim", "--config", str(path), "--out", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "round,gap,agg_error,bound_rhs"
        assert len(lines) == 1 + 4 + 1  # header + rounds + final gap row
