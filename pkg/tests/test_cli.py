import json
import os
import shutil
import subprocess
import sys

import pytest

from ringgossip.cli import main

HERE = os.path.dirname(__file__)
SPLIT16 = os.path.join(HERE, "..", "scenarios", "split16.json")


def write_scenario(tmp_path, data):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(data))
    return str(path)


class TestCmdRun:
    def test_bundled_fixture_exit_zero(self, tmp_path, capsys):
        out = str(tmp_path / "out")
        assert main(["run", SPLIT16, "--out", out]) == 0
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["final_partitions"]["0"] == list(range(16))
        assert summary["violations"] == 0
        events = (tmp_path / "out" / "events.jsonl").read_text().strip().split("\n")
        assert all(json.loads(line) for line in events)
        metrics = (tmp_path / "out" / "metrics.csv").read_text().split("\n")
        assert metrics[0] == "round,gossip_sent,record_sent,baseline_sent,components,converged,violations"

    def test_overlapping_fragments_exit_two(self, tmp_path, capsys):
        path = write_scenario(
            tmp_path,
            {
                "schema": 1, "n": 8, "seed": 0,
                "events": [{"round": 2, "kind": "split", "fragments": [[0, 1], [1, 2]]}],
            },
        )
        assert main(["run", path, "--out", str(tmp_path / "o")]) == 2
        assert "overlap" in capsys.readouterr().err

    def test_impossible_round_budget_exit_three(self, tmp_path, capsys):
        path = write_scenario(tmp_path, {"schema": 1, "n": 64, "seed": 0, "max_rounds": 1})
        assert main(["run", path, "--out", str(tmp_path / "o")]) == 3

    def test_missing_file_environment_error(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == 1

    def test_seed_override_changes_log_header(self, tmp_path):
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["run", SPLIT16, "--seed", "123", "--out", out_a]) == 0
        assert main(["run", SPLIT16, "--out", out_b]) == 0
        head_a = json.loads(open(os.path.join(out_a, "events.jsonl")).readline())
        head_b = json.loads(open(os.path.join(out_b, "events.jsonl")).readline())
        assert head_a["seed"] == 123 and head_b["seed"] == 7

    def test_baseline_column_filled_when_configured(self, tmp_path):
        path = write_scenario(
            tmp_path,
            {"schema": 1, "n": 8, "seed": 1, "max_rounds": 30, "baseline": {"fanout": 3}},
        )
        out = str(tmp_path / "out")
        assert main(["run", path, "--out", out]) == 0
        rows = open(os.path.join(out, "metrics.csv")).read().strip().split("\n")[1:]
        baseline_cells = [int(r.split(",")[3]) for r in rows]
        assert any(v == 24 for v in baseline_cells)  # 3 * 8


class TestCmdSweep:
    def test_small_sweep(self, tmp_path, capsys):
        out = str(tmp_path / "sweep")
        code = main(["sweep", "--sizes", "8,16", "--trials", "2", "--out", out])
        assert code == 0
        summary = json.loads((tmp_path / "sweep" / "sweep_summary.json").read_text())
        assert set(summary["per_size"]) == {"8", "16"}
        assert isinstance(summary["fitted_exponents"]["rounds_vs_log_n"], float)
        csv_lines = (tmp_path / "sweep" / "sweep.csv").read_text().strip().split("\n")
        assert len(csv_lines) == 1 + 2 * 2
        # fanout-3 epidemic costs at least 1.5x the structured protocol
        # at every size (3n vs at most 2n per round)
        for size, row in summary["per_size"].items():
            ratio = row["baseline_msgs_per_round_mean"] / row["structured_msgs_per_round_mean"]
            assert ratio >= 1.5, (size, ratio)

    def test_single_size_reports_na(self, tmp_path):
        out = str(tmp_path / "sweep")
        assert main(["sweep", "--sizes", "8", "--trials", "1", "--out", out]) == 0
        summary = json.loads((tmp_path / "sweep" / "sweep_summary.json").read_text())
        assert summary["fitted_exponents"]["rounds_vs_log_n"] == "N/A"

    def test_zero_trials_rejected(self, tmp_path, capsys):
        assert main(["sweep", "--sizes", "8", "--trials", "0", "--out", str(tmp_path)]) == 2

    def test_undersized_networks_rejected(self, tmp_path):
        assert main(["sweep", "--sizes", "1,8", "--trials", "1", "--out", str(tmp_path)]) == 2

    def test_bad_sizes_string_rejected(self, tmp_path):
        assert main(["sweep", "--sizes", "8,xyz", "--trials", "1", "--out", str(tmp_path)]) == 2


class TestCliProcess:
    def test_console_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "ringgossip.cli", "run", SPLIT16, "--out", str(tmp_path / "o")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert json.loads(proc.stdout)["converged"] is True

    def test_cli_matches_library_event_log(self, tmp_path):
        from ringgossip.harness import run as lib_run
        from ringgossip.scenario import Scenario

        out = str(tmp_path / "out")
        assert main(["run", SPLIT16, "--out", out]) == 0
        cli_log = open(os.path.join(out, "events.jsonl")).read()
        lib_log = lib_run(Scenario.from_file(SPLIT16)).sim.event_log_text()
        assert cli_log == lib_log
