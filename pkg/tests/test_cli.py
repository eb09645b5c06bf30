"""Command line interface: pipeline coverage and error exits."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from synsculptor import metrics as metrics_mod
from synsculptor import synergy as synergy_mod
from synsculptor import trajio
from synsculptor.cli import main


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def workdir(tmp_path_factory, corpus_motions):
    d = tmp_path_factory.mktemp("cli")
    trajio.save_trajectory(corpus_motions["squat"], d / "squat.csv")
    return d


class TestPipeline:
    def test_ingest_resamples_and_tags(self, runner, workdir):
        r = runner.invoke(
            main,
            [
                "ingest",
                str(workdir / "squat.csv"),
                "--out",
                str(workdir / "squat50.csv"),
                "--resample-hz",
                "50",
                "--source",
                "mocap",
            ],
        )
        assert r.exit_code == 0, r.output
        traj = trajio.load_trajectory(workdir / "squat50.csv")
        assert traj.rate_hz == 50.0
        assert traj.source == "mocap"

    def test_segment_prints_csv(self, runner, workdir):
        r = runner.invoke(main, ["segment", str(workdir / "squat.csv")])
        assert r.exit_code == 0, r.output
        lines = r.output.strip().splitlines()
        assert lines[0] == "start_s,end_s,peak_dP"
        assert len(lines) == 6
        for line in lines[1:]:
            start_s, end_s, peak = (float(c) for c in line.split(","))
            assert end_s > start_s

    def test_extract_writes_library(self, runner, workdir):
        r = runner.invoke(
            main,
            [
                "extract",
                str(workdir / "squat.csv"),
                "--out",
                str(workdir / "lib.json"),
                "--name",
                "squat",
            ],
        )
        assert r.exit_code == 0, r.output
        lib = synergy_mod.load_library(workdir / "lib.json")
        assert lib.name == "squat"
        assert len(lib.entries) == 5
        assert "var3" in r.output

    def test_synth_const_coeffs(self, runner, workdir):
        r = runner.invoke(
            main,
            [
                "synth",
                str(workdir / "lib.json"),
                "squat-01",
                "--out",
                str(workdir / "syn.csv"),
                "--coeffs",
                "0.5,0,0",
                "--duration",
                "1.5",
            ],
        )
        assert r.exit_code == 0, r.output
        traj = trajio.load_trajectory(workdir / "syn.csv")
        assert traj.n_frames == 151
        assert traj.source == "synthesized"

    def test_sequence_renders_plan(self, runner, workdir):
        plan = {
            "rate_hz": 100.0,
            "steps": [
                {
                    "library": "squat",
                    "label": "squat-01",
                    "coeffs": {"mode": "const", "values": [0.5, 0.0, 0.0]},
                    "duration_s": 1.0,
                    "transition": {"kind": "linear-blend", "window_s": 0.4},
                },
                {"library": "squat", "label": "squat-02", "duration_s": 1.2},
            ],
        }
        (workdir / "plan.json").write_text(json.dumps(plan))
        r = runner.invoke(
            main,
            [
                "sequence",
                str(workdir / "plan.json"),
                "--library",
                str(workdir / "lib.json"),
                "--out",
                str(workdir / "seq.csv"),
            ],
        )
        assert r.exit_code == 0, r.output
        traj = trajio.load_trajectory(workdir / "seq.csv")
        assert traj.n_frames == 221

    def test_metrics_csv_schema(self, runner, workdir):
        r = runner.invoke(
            main, ["metrics", str(workdir / "squat.csv"), str(workdir / "syn.csv")]
        )
        assert r.exit_code == 0, r.output
        lines = r.output.strip().splitlines()
        assert lines[0] == metrics_mod.CSV_HEADER
        assert len(lines) == 3
        assert lines[1].split(",")[0] == "squat"

    def test_metrics_with_baseline_ratios(self, runner, workdir):
        r = runner.invoke(
            main,
            [
                "metrics",
                str(workdir / "squat.csv"),
                str(workdir / "syn.csv"),
                "--baseline",
                "squat",
            ],
        )
        assert r.exit_code == 0, r.output
        header = r.output.splitlines()[0]
        assert header.endswith("ratio_dP,ratio_dKE,ratio_power,ratio_foot_slide")

    def test_project_into_library_span(self, runner, workdir):
        r = runner.invoke(
            main,
            [
                "project",
                str(workdir / "syn.csv"),
                str(workdir / "lib.json"),
                "squat-00",
                "--out",
                str(workdir / "proj.csv"),
            ],
        )
        assert r.exit_code == 0, r.output
        traj = trajio.load_trajectory(workdir / "proj.csv")
        S = synergy_mod.load_library(workdir / "lib.json").find("squat-00").synergy.S
        residual = traj.velocities - traj.velocities @ S @ S.T
        assert np.max(np.abs(residual)) < 1e-9


class TestErrors:
    def test_unknown_label_exits_nonzero_with_module_text(self, runner, workdir):
        r = runner.invoke(
            main,
            ["synth", str(workdir / "lib.json"), "ghost-00", "--out", str(workdir / "x.csv")],
        )
        assert r.exit_code != 0
        assert "no library entry labeled 'ghost-00'" in r.output

    def test_bad_threshold_exits_nonzero(self, runner, workdir):
        r = runner.invoke(
            main, ["segment", str(workdir / "squat.csv"), "--threshold", "-1"]
        )
        assert r.exit_code != 0
        assert "dp_threshold" in r.output

    def test_missing_sidecar_exits_nonzero(self, runner, workdir):
        orphan = workdir / "orphan.csv"
        orphan.write_text("t_s,x\n0.0,1.0\n")
        r = runner.invoke(main, ["segment", str(orphan)])
        assert r.exit_code != 0
        assert "sidecar" in r.output

    def test_model_mismatch_exits_nonzero(self, runner, workdir):
        r = runner.invoke(
            main,
            [
                "synth",
                str(workdir / "lib.json"),
                "squat-01",
                "--out",
                str(workdir / "x.csv"),
                "--model",
                "chain3",
            ],
        )
        assert r.exit_code != 0
        assert "chain3" in r.output

    def test_unknown_baseline_exits_nonzero(self, runner, workdir):
        r = runner.invoke(
            main, ["metrics", str(workdir / "squat.csv"), "--baseline", "zz"]
        )
        assert r.exit_code != 0

    def test_blend_window_violation_reports_module_text(self, runner, workdir):
        plan = {
            "rate_hz": 100.0,
            "steps": [
                {
                    "library": "squat",
                    "label": "squat-01",
                    "duration_s": 1.0,
                    "coeffs": {"mode": "const", "values": [0.5, 0.0, 0.0]},
                    "transition": {"kind": "linear-blend", "window_s": 9.0},
                },
                {"library": "squat", "label": "squat-02", "duration_s": 1.2},
            ],
        }
        (workdir / "badplan.json").write_text(json.dumps(plan))
        r = runner.invoke(
            main,
            [
                "sequence",
                str(workdir / "badplan.json"),
                "--library",
                str(workdir / "lib.json"),
                "--out",
                str(workdir / "x.csv"),
            ],
        )
        assert r.exit_code != 0
        assert "blend window" in r.output


class TestEnvironment:
    def test_model_option_reads_env_prefix(self, runner, workdir):
        r = runner.invoke(
            main,
            ["segment", str(workdir / "squat.csv")],
            env={"SYNSCULPT_MODEL": "humanoid19"},
        )
        assert r.exit_code == 0, r.output
        r = runner.invoke(
            main,
            ["segment", str(workdir / "squat.csv")],
            env={"SYNSCULPT_MODEL": "chain3"},
        )
        assert r.exit_code != 0
