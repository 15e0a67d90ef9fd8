"""Command-line entry point: config parsing, runs, exit codes."""

import os

import pytest

from dirmod.cli import load_config, main, parse_values
from dirmod.errors import ConfigError

GOOD_CONFIG = """\
n_t = 6
n_e = 6
user_antenna_counts = [1, 1, 1]
order = 8
gamma_db = 15.56
trials = 2
symbols_per_channel = 3
eve_strategies = ["zf"]
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "scenario.toml"
    path.write_text(GOOD_CONFIG)
    return path


class TestParseValues:
    def test_comma_list_ints(self):
        assert parse_values("10,12,14") == (10, 12, 14)

    def test_comma_list_floats(self):
        assert parse_values("1.5,2.5") == (1.5, 2.5)

    def test_inclusive_range(self):
        assert parse_values("10..13") == (10, 11, 12, 13)

    def test_range_with_step(self):
        assert parse_values("10..20..5") == (10, 15, 20)

    def test_single_value(self):
        assert parse_values("7") == (7,)

    def test_garbage_rejected(self):
        with pytest.raises(ConfigError):
            parse_values("a..b")
        with pytest.raises(ConfigError):
            parse_values("")

    def test_descending_range_rejected(self):
        with pytest.raises(ConfigError):
            parse_values("20..10")


class TestLoadConfig:
    def test_loads_fields(self, config_file):
        cfg = load_config(str(config_file))
        assert cfg.n_t == 6
        assert cfg.user_antenna_counts == (1, 1, 1)
        assert cfg.eve_strategies == ("zf",)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "nope.toml"))

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(GOOD_CONFIG + 'frequency_ghz = 28\n')
        with pytest.raises(ConfigError) as exc:
            load_config(str(path))
        assert "frequency_ghz" in str(exc.value)

    def test_bad_toml_rejected(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("n_t = [unterminated")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_wrong_type_rejected(self, tmp_path):
        path = tmp_path / "typed.toml"
        path.write_text(GOOD_CONFIG.replace("n_t = 6", 'n_t = "six"'))
        with pytest.raises(ConfigError):
            load_config(str(path))


class TestMain:
    def test_run_writes_csv_and_figures(self, config_file, tmp_path, capsys):
        out = tmp_path / "result.csv"
        code = main(["run", "--config", str(config_file),
                     "--out", str(out)])
        assert code == 0
        assert out.exists()
        printed = capsys.readouterr().out
        assert str(out) in printed
        text = out.read_text()
        assert text.splitlines()[0].startswith("sweep_param,")
        assert len(text.splitlines()) == 2

    def test_no_figures_flag(self, config_file, tmp_path):
        out = tmp_path / "bare.csv"
        code = main(["run", "--config", str(config_file), "--out", str(out),
                     "--no-figures"])
        assert code == 0
        pngs = [f for f in os.listdir(tmp_path) if f.endswith(".png")]
        assert pngs == []

    def test_sweep_command(self, config_file, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(["sweep", "--config", str(config_file),
                     "--param", "nt", "--values", "6,8",
                     "--out", str(out), "--no-figures"])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 3  # header + two points

    def test_sweep_renders_figures(self, config_file, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(["sweep", "--config", str(config_file),
                     "--param", "nt", "--values", "6,8",
                     "--out", str(out)])
        assert code == 0
        pngs = sorted(f for f in os.listdir(tmp_path) if f.endswith(".png"))
        assert any("power" in f for f in pngs)
        assert any("ser" in f for f in pngs)

    def test_reruns_are_bit_identical(self, config_file, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            assert main(["run", "--config", str(config_file),
                         "--out", str(out), "--no-figures"]) == 0
        assert out1.read_text() == out2.read_text()

    def test_seed_override_changes_output(self, config_file, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        main(["run", "--config", str(config_file), "--out", str(out1),
              "--no-figures"])
        main(["run", "--config", str(config_file), "--out", str(out2),
              "--seed", "99", "--no-figures"])
        assert out1.read_text() != out2.read_text()

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text("n_t = 6\n")  # n_e missing
        code = main(["run", "--config", str(path),
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "error" in capsys.readouterr().err.lower()

    def test_missing_config_exit_code(self, tmp_path):
        code = main(["run", "--config", str(tmp_path / "ghost.toml"),
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_infeasible_run_exit_code(self, tmp_path):
        path = tmp_path / "tight.toml"
        path.write_text(
            "n_t = 2\nn_e = 2\nuser_antenna_counts = [1, 1, 1, 1]\n"
            "trials = 2\nsymbols_per_channel = 2\n"
        )
        code = main(["run", "--config", str(path),
                     "--out", str(tmp_path / "x.csv")])
        assert code == 1

    def test_preset_profile_smoke(self, tmp_path):
        out = tmp_path / "profile.csv"
        code = main(["preset", "fig14", "--trials", "4", "--symbols", "3",
                     "--out", str(out), "--no-figures"])
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert "angle_deg" in header

    def test_preset_timing_smoke(self, tmp_path):
        out = tmp_path / "timing.csv"
        code = main(["preset", "fig15", "--out", str(out), "--no-figures"])
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert "table_size" in header

    def test_preset_sweep_smoke(self, tmp_path):
        out = tmp_path / "fig5.csv"
        code = main(["preset", "fig5", "--trials", "2", "--symbols", "2",
                     "--out", str(out), "--no-figures", "--threads", "2"])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        # four design modes x four transmit sizes
        assert len(lines) == 17
