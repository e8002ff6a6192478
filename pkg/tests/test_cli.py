import os

import pytest

from qnnbench.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    build_spec,
    load_config,
    main,
)
from qnnbench.selftest import check_names, run_checks

FAST_RUN_ARGS = [
    "--seeds",
    "1",
    "--depths",
    "1",
    "--activations",
    "tanh",
    "--epochs",
    "5",
    "--cutoff",
    "8",
    "--workers",
    "1",
]


def write_config(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


class TestConfig:
    def test_defaults_document_paper_values(self):
        cfg = load_config(None)
        assert cfg["optimizer"]["learning_rate"] == 0.01
        assert cfg["optimizer"]["epochs"] == 10000
        assert cfg["cutoff"] == 30
        assert cfg["train_points"] == 20
        assert cfg["test_points"] == 200
        assert cfg["seeds"] == 100

    def test_unknown_key_rejected(self, tmp_path):
        from qnnbench.cli import ConfigError

        path = write_config(tmp_path, "stratgy: layers\n")
        with pytest.raises(ConfigError, match="stratgy"):
            load_config(path)

    def test_unknown_optimizer_key_rejected(self, tmp_path):
        from qnnbench.cli import ConfigError

        path = write_config(tmp_path, "optimizer:\n  lr: 0.5\n")
        with pytest.raises(ConfigError, match="lr"):
            load_config(path)

    def test_build_spec_default_depths_per_strategy(self):
        cfg = load_config(None)
        cfg["seeds"] = 1
        spec, _, _ = build_spec(cfg)
        assert {m.depth for m in spec.models if m.kind == "qnn"} == {1, 2, 3, 4, 5}
        cfg["strategy"] = "parameters"
        spec, _, _ = build_spec(cfg)
        assert {m.depth for m in spec.models if m.kind == "qnn"} == {2, 3, 4, 5}

    def test_output_dir_falls_back_to_env(self, monkeypatch):
        monkeypatch.setenv("QNNBENCH_OUTPUT_DIR", "/tmp/qnnbench-out")
        cfg = load_config(None)
        _, out_dir, _ = build_spec(cfg)
        assert out_dir == "/tmp/qnnbench-out"


class TestRunCommand:
    def test_minimal_config_three_output_files(self, tmp_path):
        # one model (the QNN alone) -> runs.csv + aggregates.csv + one curve
        config = write_config(
            tmp_path,
            "strategy: layers\n"
            "target: sine\n"
            "depths: [1]\n"
            "activations: []\n"
            "seeds: 1\n"
            "cutoff: 8\n"
            "workers: 1\n"
            "optimizer:\n"
            "  epochs: 5\n"
            f"output_dir: {tmp_path / 'out'}\n",
        )
        assert main(["run", "--config", config]) == EXIT_OK
        files = sorted(os.listdir(tmp_path / "out"))
        assert files == ["aggregates.csv", "curve_qnn_L1_sine.csv", "runs.csv"]

    def test_negative_learning_rate_names_field(self, tmp_path, capsys):
        config = write_config(tmp_path, "optimizer:\n  learning_rate: -0.5\n")
        code = main(["run", "--config", config])
        assert code == EXIT_CONFIG
        assert "learning_rate" in capsys.readouterr().err

    def test_unknown_config_key_exits_one(self, tmp_path, capsys):
        config = write_config(tmp_path, "depth: [1]\n")
        assert main(["run", "--config", config]) == EXIT_CONFIG
        assert "depth" in capsys.readouterr().err

    def test_malformed_yaml_exits_one(self, tmp_path, capsys):
        config = write_config(tmp_path, "strategy: [unclosed\n")
        assert main(["run", "--config", config]) == EXIT_CONFIG
        assert "config" in capsys.readouterr().err.lower()

    def test_flag_overrides_file_seeds(self, tmp_path):
        out = tmp_path / "out"
        config = write_config(
            tmp_path,
            "depths: [1]\nactivations: [tanh]\nseeds: 1\ncutoff: 8\nworkers: 1\n"
            f"optimizer: {{epochs: 5}}\noutput_dir: {out}\n",
        )
        assert main(["run", "--config", config, "--seeds", "2"]) == EXIT_OK
        rows = (out / "runs.csv").read_text().splitlines()
        assert len(rows) == 1 + 2 * 2  # header + 2 models x 2 seeds

    def test_run_without_config_uses_flags(self, tmp_path):
        out = str(tmp_path / "flagged")
        code = main(["run", *FAST_RUN_ARGS, "--output-dir", out])
        assert code == EXIT_OK
        assert os.path.isfile(os.path.join(out, "runs.csv"))

    def test_env_var_output_dir(self, tmp_path, monkeypatch):
        target_dir = tmp_path / "env-out"
        monkeypatch.setenv("QNNBENCH_OUTPUT_DIR", str(target_dir))
        assert main(["run", *FAST_RUN_ARGS]) == EXIT_OK
        assert (target_dir / "runs.csv").is_file()

    def test_bad_flag_value_exits_one(self, capsys):
        assert main(["run", "--depths", "one,two"]) == EXIT_CONFIG


class TestReportCommand:
    def _run(self, tmp_path):
        out = tmp_path / "out"
        assert main(["run", *FAST_RUN_ARGS, "--output-dir", str(out)]) == EXIT_OK
        return out

    def test_report_is_noop_on_aggregates(self, tmp_path):
        out = self._run(tmp_path)
        before = (out / "aggregates.csv").read_bytes()
        assert main(["report", str(out)]) == EXIT_OK
        assert (out / "aggregates.csv").read_bytes() == before

    def test_missing_runs_csv(self, tmp_path, capsys):
        assert main(["report", str(tmp_path)]) == EXIT_CONFIG
        assert "runs.csv" in capsys.readouterr().err

    def test_empty_runs_csv_warns_and_passes(self, tmp_path, capsys):
        out = self._run(tmp_path)
        runs = out / "runs.csv"
        runs.write_text(runs.read_text().splitlines()[0] + "\n")
        assert main(["report", str(out)]) == EXIT_OK
        assert "warning" in capsys.readouterr().out.lower()
        assert (out / "aggregates.csv").read_text().count("\n") == 1

    def test_tampered_row_exits_two(self, tmp_path, capsys):
        out = self._run(tmp_path)
        runs = out / "runs.csv"
        lines = runs.read_text().splitlines()
        parts = lines[1].split(",")
        parts[8] = "banana"
        lines[1] = ",".join(parts)
        runs.write_text("\n".join(lines) + "\n")
        assert main(["report", str(out)]) == EXIT_RUNTIME
        assert "row 2" in capsys.readouterr().err

    def test_charts_written(self, tmp_path):
        pytest.importorskip("matplotlib")
        out = self._run(tmp_path)
        assert main(["report", str(out), "--charts"]) == EXIT_OK
        assert (out / "chart_layers_sine.svg").is_file()


class TestSelftestCommand:
    def test_all_checks_pass_on_fresh_build(self):
        results = run_checks(30)
        for c in results:
            assert c.passed, f"{c.name}: {c.detail}"

    def test_cli_exit_zero(self, capsys):
        assert main(["selftest"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("[PASS]") == len(check_names())

    def test_tiny_cutoff_fails_squeezed_variance(self, capsys):
        assert main(["selftest", "--cutoff", "2"]) == EXIT_RUNTIME
        out = capsys.readouterr().out
        assert "[FAIL] squeezed_variance" in out

    def test_list_flag_prints_names_without_running(self, capsys):
        assert main(["selftest", "--list"]) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert out == check_names()

    def test_check_names_match_results(self):
        assert [c.name for c in run_checks(12)] == check_names()


class TestUsage:
    def test_unknown_subcommand_exits_one(self, capsys):
        assert main(["frobnicate"]) == EXIT_CONFIG

    def test_summary_table_stable_columns(self, tmp_path, capsys):
        out = str(tmp_path / "out")
        main(["run", *FAST_RUN_ARGS, "--output-dir", out])
        header = capsys.readouterr().out.splitlines()[0].split()
        assert header == [
            "model_id",
            "target",
            "layers",
            "params",
            "activation",
            "seeds",
            "mean_mse",
            "min_mse",
        ]
