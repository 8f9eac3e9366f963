"""Command line interface: commands, outputs, seed override, exit codes."""

import json
import sys

import pytest
from click.testing import CliRunner

from declutter import cli as cli_mod
from declutter import sim


@pytest.fixture
def runner():
    return CliRunner()


def test_run_batch_writes_report_and_episodes(runner, tmp_path):
    out = tmp_path / "batch"
    res = runner.invoke(
        cli_mod.cli,
        ["run-batch", "--variant", "baseline", "--trials", "12",
         "--seed", "3", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    assert "baseline: GS=" in res.output
    assert (out / "report.csv").exists()
    episodes = sorted(out.glob("episode_*.jsonl"))
    assert episodes
    header = (out / "report.csv").read_text().splitlines()[0]
    assert header.startswith("gs,")


def test_run_batch_reads_config_file(runner, tmp_path):
    cfg = {"variant": "baseline", "trials": 8, "seed": 5, "max_objects": 6}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    out = tmp_path / "batch"
    res = runner.invoke(
        cli_mod.cli, ["run-batch", "--config", str(p), "--out", str(out)]
    )
    assert res.exit_code == 0, res.output
    assert "baseline" in res.output


def test_run_batch_env_seed_override(runner, tmp_path, monkeypatch):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    monkeypatch.setenv("DECLUTTER_SEED", "11")
    args = ["run-batch", "--variant", "baseline", "--trials", "10", "--seed", "3"]
    res_a = runner.invoke(cli_mod.cli, args + ["--out", str(out_a)])
    monkeypatch.delenv("DECLUTTER_SEED")
    res_b = runner.invoke(
        cli_mod.cli,
        ["run-batch", "--variant", "baseline", "--trials", "10",
         "--seed", "11", "--out", str(out_b)],
    )
    assert res_a.exit_code == 0 and res_b.exit_code == 0
    assert (out_a / "report.csv").read_text() == (out_b / "report.csv").read_text()


def test_run_batch_rejects_unknown_variant(runner, tmp_path):
    res = runner.invoke(
        cli_mod.cli,
        ["run-batch", "--variant", "nope", "--out", str(tmp_path / "x")],
    )
    assert res.exit_code != 0


def test_sweep_gdi_writes_grid_csv(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    res = runner.invoke(
        cli_mod.cli,
        ["sweep-gdi", "--lct", "8,16", "--hct", "0.01,0.02",
         "--trials", "6", "--seed", "1", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    assert "best cell:" in res.output
    lines = out.read_text().splitlines()
    assert lines[0] == "lct,hct,gs"
    assert len(lines) == 1 + 4  # 2x2 grid


def test_ablate_k_writes_rows(runner, tmp_path):
    out = tmp_path / "ablate.csv"
    res = runner.invoke(
        cli_mod.cli,
        ["ablate-k", "--k-values", "5", "--trials", "8",
         "--seed", "1", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    text = out.read_text()
    assert text.startswith("variant,bin_lo,bin_hi,")
    assert "naive_k5" in text and "exact" in text and "estimate" in text


def test_analyze_clutter_compares_log_dirs(runner, tmp_path):
    d_dir = tmp_path / "disperse"
    g_dir = tmp_path / "grasp"
    for variant, out in (("disperse_grasp", d_dir), ("grasp_optim", g_dir)):
        res = runner.invoke(
            cli_mod.cli,
            ["run-batch", "--variant", variant, "--trials", "10",
             "--seed", "2", "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
    out_path = tmp_path / "effect.csv"
    res = runner.invoke(
        cli_mod.cli,
        ["analyze-clutter", "--disperse-logs", str(d_dir),
         "--grasp-logs", str(g_dir), "--out", str(out_path)],
    )
    assert res.exit_code == 0, res.output
    assert out_path.read_text().count("\n") >= 2


def test_render_maps_emits_images(runner, tmp_path):
    scene_path = tmp_path / "scene.json"
    sim.save_scene(sim.spawn_heap(4, 6), scene_path)
    out = tmp_path / "maps"
    res = runner.invoke(
        cli_mod.cli, ["render-maps", "--scene", str(scene_path), "--out", str(out)]
    )
    assert res.exit_code == 0, res.output
    for name in ("rgb.ppm", "depth.pgm", "clutter.pgm", "distance.pgm"):
        assert (out / name).exists(), name


def _run_main(monkeypatch, argv):
    monkeypatch.setattr(sys, "argv", ["declutter"] + argv)
    with pytest.raises(SystemExit) as exc:
        cli_mod.main()
    return exc.value.code


def test_main_maps_usage_errors_to_exit_2(monkeypatch):
    assert _run_main(monkeypatch, ["sweep-gdi", "--lct", "8"]) == 2


def test_main_maps_bad_config_to_exit_2(monkeypatch, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert _run_main(
        monkeypatch,
        ["run-batch", "--config", str(p), "--out", str(tmp_path / "o")],
    ) == 2


def test_main_maps_runtime_failure_to_exit_3(monkeypatch, tmp_path):
    def boom(*a, **kw):
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(cli_mod.experiments, "run_batch", boom)
    assert _run_main(
        monkeypatch,
        ["run-batch", "--variant", "baseline", "--trials", "4",
         "--out", str(tmp_path / "o")],
    ) == 3
