"""Command line interface for batch experiments and file emitters."""

import json
import os
import pathlib
import sys

import click
import numpy as np

from . import clutter as clutter_mod
from . import experiments, grasp, metrics, policy, push, sim


def _seed_override(seed):
    env = os.environ.get("DECLUTTER_SEED")
    return int(env) if env else seed


@click.group()
def cli():
    """Disperse-and-pick experiments on the 2D tabletop simulator."""


@cli.command("run-batch")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--variant", type=click.Choice(experiments.VARIANTS), default=None)
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_dir", type=click.Path(), required=True)
def run_batch_cmd(config_path, variant, trials, seed, out_dir):
    """Run episodes until the configured grasp-trial count; write JSONL + CSV."""
    if config_path:
        with open(config_path) as f:
            cfg = experiments.ExperimentConfig.from_json(json.load(f))
    else:
        cfg = experiments.ExperimentConfig()
    if variant:
        cfg.variant = variant
    if trials:
        cfg.trials = trials
    cfg.seed = _seed_override(seed if seed else cfg.seed)
    report, _ = experiments.run_batch(cfg, out_dir=out_dir)
    click.echo(
        f"{cfg.variant}: GS={report.gs:.1f} MPC={report.mpc:.1f} "
        f"GS_wm={report.gs_wm:.1f} MPPH={report.mpph:.1f} "
        f"attempts={report.attempts}"
    )


@cli.command("calibrate")
@click.option("--seeds", type=int, default=50, help="number of calibration seeds")
@click.option("--seed", type=int, default=0)
@click.option("--percentile-lo", type=float, default=10.0)
@click.option("--percentile-hi", type=float, default=90.0)
@click.option("--out", "out_path", type=click.Path(), default=None)
def calibrate_cmd(seeds, seed, percentile_lo, percentile_hi, out_path):
    """Derive clutter thresholds from empty vs heaped scenes."""
    base = _seed_override(seed)
    seed_list = [experiments.episode_seed(base, i) for i in range(seeds)]
    t_global, t_local = experiments.calibrate_thresholds(
        seed_list, percentile_lo, percentile_hi
    )
    fragment = {"t_global": t_global, "t_local": t_local}
    if out_path:
        pathlib.Path(out_path).write_text(json.dumps(fragment, indent=2) + "\n")
    click.echo(json.dumps(fragment))


@cli.command("sweep-gdi")
@click.option("--lct", required=True, help="comma-separated pixel values")
@click.option("--hct", required=True, help="comma-separated meter values")
@click.option("--trials", type=int, default=200, help="grasp attempts per cell")
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", type=click.Path(), required=True)
def sweep_gdi_cmd(lct, hct, trials, seed, out_path):
    """Grasp-success heat map over the (LCT, HCT) grid."""
    lcts = [float(v) for v in lct.split(",")]
    hcts = [float(v) for v in hct.split(",")]
    cfg = experiments.ExperimentConfig(
        variant="grasp_optim_adaptive", trials=trials, seed=_seed_override(seed)
    )
    rows = experiments.sweep_gdi(cfg, lcts, hcts)
    pathlib.Path(out_path).write_text(experiments.sweep_csv(rows))
    best = max(rows, key=lambda r: r[2])
    click.echo(f"best cell: lct={best[0]} hct={best[1]} gs={best[2]:.1f}")


@cli.command("ablate-k")
@click.option("--k-values", default="5,10,15,20")
@click.option("--trials", type=int, default=600, help="grasp attempts per variant")
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", type=click.Path(), required=True)
def ablate_k_cmd(k_values, trials, seed, out_path):
    """GS per object-count bin for Naive-k / Exact / Estimate variants."""
    ks = [int(v) for v in k_values.split(",")]
    cfg = experiments.ExperimentConfig(
        variant="grasp_optim_adaptive", trials=trials, seed=_seed_override(seed)
    )
    rows = experiments.ablate_k(cfg, ks, trials)
    pathlib.Path(out_path).write_text(experiments.ablate_csv(rows))
    click.echo(f"wrote {len(rows)} rows")


def _load_log_dir(path):
    logs = []
    for p in sorted(pathlib.Path(path).glob("episode_*.jsonl")):
        logs.append(policy.EpisodeLog.from_jsonl(p.read_text()))
    return logs


@cli.command("analyze-clutter")
@click.option("--disperse-logs", type=click.Path(exists=True), required=True)
@click.option("--grasp-logs", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def analyze_clutter_cmd(disperse_logs, grasp_logs, out_path):
    """Per-bin clutter/MPC/GS comparison of disperse vs grasp-only logs."""
    rows = experiments.analyze_clutter_effect(
        _load_log_dir(disperse_logs), _load_log_dir(grasp_logs)
    )
    pathlib.Path(out_path).write_text(experiments.clutter_effect_csv(rows))
    click.echo(f"wrote {len(rows)} rows")


@cli.command("render-maps")
@click.option("--scene", "scene_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(), default=".")
def render_maps_cmd(scene_path, out_dir):
    """Emit RGB (PPM), depth, clutter map and distance field (PGM) for a scene."""
    scene = sim.load_scene(scene_path)
    cam = sim.CameraModel()
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rgb, depth = sim.render(scene, cam)
    sim.write_ppm(rgb, out / "rgb.ppm")
    sim.write_pgm16(depth, out / "depth.pgm")
    cmap = clutter_mod.compute_clutter_map(rgb)
    clutter_mod.save_clutter_pgm(cmap, out / "clutter.pgm")
    background = sim.render_background(scene, cam)
    mask = grasp.depth_filter(depth, background)
    field = push.distance_transform(mask)
    fmax = field.max()
    sim.write_pgm16(field, out / "distance.pgm", scale=65535.0 / fmax if fmax else 1.0)
    click.echo(f"wrote rgb.ppm depth.pgm clutter.pgm distance.pgm to {out}")


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.Abort:
        sys.exit(2)
    except (experiments.ConfigError, ValueError, json.JSONDecodeError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except Exception as exc:  # runtime failures map to exit code 3
        click.echo(f"runtime error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
