"""Batch experiment harness: variant ladder runs, threshold calibration,
GDI hyperparameter sweep, k-estimation ablation and clutter-effect analysis.

Everything is deterministic given the master seed: episode i always gets
the same heap and the same per-attempt randomness, so variants sharing a
seed see identical scene sequences.
"""

import csv
import io
import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import clutter as clutter_mod
from . import grasp as grasp_mod
from . import metrics as metrics_mod
from . import policy as policy_mod
from . import sim

VARIANTS = ("baseline", "grasp_optim", "grasp_optim_adaptive", "disperse_grasp")

# the pre-optimization GDI regime: lateral threshold inside the target
# object, near-zero height clearance
BASELINE_GDI = grasp_mod.GdiParams(lct=4.0, hct=0.005)
OPTIMIZED_GDI = grasp_mod.GdiParams(lct=16.0, hct=0.02)


class ConfigError(Exception):
    pass


class Overlap(Exception):
    """Calibration distributions are inseparable."""


@dataclass
class ExperimentConfig:
    variant: str = "disperse_grasp"
    trials: int = 2000
    max_objects: int = 20
    seed: int = 0
    durations: metrics_mod.Durations = field(default_factory=metrics_mod.Durations)
    episode: policy_mod.EpisodeConfig = None
    k_fit_samples: int = 120

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.trials < 1 or not 1 <= self.max_objects <= 20:
            raise ConfigError("trials must be >= 1 and max_objects in 1..20")

    @staticmethod
    def from_json(d):
        cfg = ExperimentConfig(
            variant=d.get("variant", "disperse_grasp"),
            trials=d.get("trials", 2000),
            max_objects=d.get("max_objects", 20),
            seed=d.get("seed", 0),
        )
        if "durations" in d:
            cfg.durations = metrics_mod.Durations(**d["durations"])
        if "k_fit_samples" in d:
            cfg.k_fit_samples = d["k_fit_samples"]
        return cfg


def episode_seed(master, index):
    ss = np.random.SeedSequence([master & (2**63 - 1), index])
    return int(ss.generate_state(1, np.uint64)[0])


def scene_size(master, index, max_objects):
    rng = np.random.default_rng(
        np.random.SeedSequence([master & (2**63 - 1), index, 7])
    )
    return int(rng.integers(1, max_objects + 1))


def variant_episode_config(variant, k_model=None, gdi=None, thresholds=None):
    """EpisodeConfig for one rung of the variant ladder."""
    base = policy_mod.EpisodeConfig()
    if thresholds is not None:
        base.thresholds = thresholds
    if variant == "baseline":
        base.use_policy = False
        base.k_mode = "fixed"
        base.gdi = gdi or BASELINE_GDI
        base.record_clutter = False
    elif variant == "grasp_optim":
        base.use_policy = False
        base.k_mode = "fixed"
        base.gdi = gdi or OPTIMIZED_GDI
        base.record_clutter = False
    elif variant == "grasp_optim_adaptive":
        base.use_policy = False
        base.k_mode = "estimate"
        base.gdi = gdi or OPTIMIZED_GDI
        base.k_model = k_model
    elif variant == "disperse_grasp":
        base.use_policy = True
        base.k_mode = "estimate"
        base.gdi = gdi or OPTIMIZED_GDI
        base.k_model = k_model
    else:
        raise ConfigError(f"unknown variant {variant!r}")
    return base


# -- k-model fitting ------------------------------------------------------


def generate_k_samples(master_seed, n_samples=120, max_objects=20):
    """(area_spread, global_clutter, object_count) from simulator-labeled scenes."""
    samples = []
    cam = sim.CameraModel()
    for i in range(n_samples):
        n = scene_size(master_seed, i, max_objects)
        scene = sim.spawn_heap(episode_seed(master_seed, i), n)
        rgb, depth = sim.render(scene, cam)
        background = sim.render_background(scene, cam)
        mask = grasp_mod.depth_filter(depth, background)
        area = grasp_mod.estimate_area_spread(mask)
        g_cs = clutter_mod.global_score(clutter_mod.compute_clutter_map(rgb))
        samples.append((area, g_cs, n))
    return samples


_K_MODEL_CACHE = {}


def fit_k_model_from_sim(master_seed=1234, n_samples=120, max_objects=20):
    key = (master_seed, n_samples, max_objects)
    if key not in _K_MODEL_CACHE:
        _K_MODEL_CACHE[key] = grasp_mod.fit_k_model(
            generate_k_samples(master_seed, n_samples, max_objects)
        )
    return _K_MODEL_CACHE[key]


# -- batch runner ----------------------------------------------------------


def run_batch(config, out_dir=None, progress=None):
    """Run episodes until the grasp-attempt count reaches config.trials.

    Returns (MetricsReport, logs); when out_dir is given, also writes one
    JSONL shard per episode and a CSV report.
    """
    episode_cfg = config.episode
    if episode_cfg is None:
        k_model = None
        if config.variant in ("grasp_optim_adaptive", "disperse_grasp"):
            k_model = fit_k_model_from_sim(
                n_samples=config.k_fit_samples, max_objects=config.max_objects
            )
        episode_cfg = variant_episode_config(config.variant, k_model=k_model)
    logs = []
    grasp_attempts = 0
    i = 0
    while grasp_attempts < config.trials:
        seed = episode_seed(config.seed, i)
        n = scene_size(config.seed, i, config.max_objects)
        try:
            scene = sim.spawn_heap(seed, n)
            log = policy_mod.run_episode(scene, episode_cfg, seed)
        except (sim.PlacementFailure, sim.NonConvergence) as exc:
            log = policy_mod.EpisodeLog(seed=seed, initial_count=n)
            log.termination = f"error:{type(exc).__name__}"
        logs.append(log)
        grasp_attempts += log.grasp_attempts
        if progress is not None:
            progress(i, grasp_attempts)
        i += 1
    report = metrics_mod.compute_metrics(logs, config.durations)
    if out_dir is not None:
        import pathlib

        out = pathlib.Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for j, log in enumerate(logs):
            (out / f"episode_{j:05d}.jsonl").write_text(log.to_jsonl() + "\n")
        (out / "report.csv").write_text(report_csv(report))
    return report, logs


REPORT_COLUMNS = ["gs", "mpc", "gs_wm", "mpph", "attempts"]
BIN_COLUMNS = ["bin_lo", "bin_hi", "attempts", "mean_local", "mpc", "gs"]


def report_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(REPORT_COLUMNS)
    w.writerow(
        [
            f"{report.gs:.6f}",
            f"{report.mpc:.6f}",
            f"{report.gs_wm:.6f}",
            f"{report.mpph:.6f}",
            report.attempts,
        ]
    )
    w.writerow([])
    w.writerow(BIN_COLUMNS)
    for row in report.by_bin:
        w.writerow(
            [
                row.lo,
                row.hi,
                row.attempts,
                f"{row.mean_local:.6f}",
                f"{row.mpc:.6f}",
                f"{row.gs:.6f}",
            ]
        )
    return buf.getvalue()


# -- threshold calibration ---------------------------------------------------


def calibrate_thresholds(
    seeds, percentile_lo=10.0, percentile_hi=90.0, max_objects=20
):
    """Derive (t_global, t_local) separating empty/isolated from heaped scenes.

    t_global: midpoint between the hi-percentile of empty-table global
    scores and the lo-percentile of full-heap global scores. t_local:
    likewise over local scores of poses on isolated objects vs in heaps.
    """
    seeds = list(seeds)
    if len(seeds) < 20:
        raise ValueError("need at least 20 seeds")
    cam = sim.CameraModel()
    empty_globals = []
    heap_globals = []
    isolated_locals = []
    crowded_locals = []
    opening_px = sim.GripperParams().opening * cam.scale
    for s in seeds:
        empty = sim.Scene(objects=[], rng_seed=s)
        rgb, _ = sim.render(empty, cam)
        empty_globals.append(
            clutter_mod.global_score(clutter_mod.compute_clutter_map(rgb))
        )

        heap = sim.spawn_heap(s, max_objects)
        rgb, depth = sim.render(heap, cam)
        background = sim.render_background(heap, cam)
        cmap = clutter_mod.compute_clutter_map(rgb)
        heap_globals.append(clutter_mod.global_score(cmap))
        poses = grasp_mod.plan_grasps(
            depth, background, k_fixed=max_objects, seed=s, n_top=3
        )
        crowded_locals.extend(
            clutter_mod.local_score(cmap, p.center, opening_px) for p in poses
        )

        single = sim.spawn_heap(s, 1)
        rgb, depth = sim.render(single, cam)
        cmap = clutter_mod.compute_clutter_map(rgb)
        poses = grasp_mod.plan_grasps(depth, background, k_fixed=1, seed=s, n_top=1)
        isolated_locals.extend(
            clutter_mod.local_score(cmap, p.center, opening_px) for p in poses
        )

    lo_g = float(np.percentile(heap_globals, percentile_lo))
    hi_g = float(np.percentile(empty_globals, percentile_hi))
    if hi_g >= lo_g:
        raise Overlap("global score distributions are inseparable")
    lo_l = float(np.percentile(crowded_locals, percentile_lo))
    hi_l = float(np.percentile(isolated_locals, percentile_hi))
    if hi_l >= lo_l:
        raise Overlap("local score distributions are inseparable")
    return 0.5 * (hi_g + lo_g), 0.5 * (hi_l + lo_l)


# -- sweeps and ablations -----------------------------------------------------


def sweep_gdi(config, lct_values, hct_values):
    """GS over the (lct, hct) grid with the grasp-only adaptive variant."""
    if not lct_values or not hct_values:
        raise ConfigError("lct and hct grids must be non-empty")
    k_model = fit_k_model_from_sim(
        n_samples=config.k_fit_samples, max_objects=config.max_objects
    )
    rows = []
    for lct in lct_values:
        for hct in hct_values:
            gdi = grasp_mod.GdiParams(lct=float(lct), hct=float(hct))
            episode_cfg = variant_episode_config(
                "grasp_optim_adaptive", k_model=k_model, gdi=gdi
            )
            cell_cfg = ExperimentConfig(
                variant="grasp_optim_adaptive",
                trials=config.trials,
                max_objects=config.max_objects,
                seed=config.seed,
            )
            cell_cfg.episode = episode_cfg
            report, _ = run_batch(cell_cfg)
            rows.append((float(lct), float(hct), report.gs))
    return rows


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["lct", "hct", "gs"])
    for lct, hct, gs in rows:
        w.writerow([f"{lct:.6f}", f"{hct:.6f}", f"{gs:.6f}"])
    return buf.getvalue()


def ablate_k(config, k_fixed_values=(5, 10, 15, 20), trials_per_variant=None):
    """GS per object-count bin for Naive-k, Exact and Estimate variants."""
    trials = trials_per_variant or config.trials
    k_model = fit_k_model_from_sim(
        n_samples=config.k_fit_samples, max_objects=config.max_objects
    )
    variants = [(f"naive_k{k}", "fixed", k) for k in k_fixed_values]
    variants.append(("exact", "exact", None))
    variants.append(("estimate", "estimate", None))
    rows = []
    for name, mode, k in variants:
        episode_cfg = variant_episode_config("grasp_optim_adaptive", k_model=k_model)
        episode_cfg.k_mode = mode
        if k is not None:
            episode_cfg.k_fixed = k
        cfg = ExperimentConfig(
            variant="grasp_optim_adaptive",
            trials=trials,
            max_objects=config.max_objects,
            seed=config.seed,
        )
        cfg.episode = episode_cfg
        report, _ = run_batch(cfg)
        for row in report.by_bin:
            rows.append((name, row.lo, row.hi, row.attempts, row.gs))
    return rows


def ablate_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["variant", "bin_lo", "bin_hi", "attempts", "gs"])
    for name, lo, hi, attempts, gs in rows:
        w.writerow([name, lo, hi, attempts, f"{gs:.6f}"])
    return buf.getvalue()


def analyze_clutter_effect(disperse_logs, grasp_only_logs, durations=None):
    """Per-bin (mean local score, MPC%, GS%) for both variants; bins with
    zero attempts emit no row."""
    if not disperse_logs or not grasp_only_logs:
        raise ValueError("both log sets must be non-empty")
    rows = []
    for name, logs in (("disperse_grasp", disperse_logs), ("grasp_only", grasp_only_logs)):
        report = metrics_mod.compute_metrics(logs, durations)
        for row in report.by_bin:
            rows.append((name, row.lo, row.hi, row.attempts, row.mean_local, row.mpc, row.gs))
    return rows


def clutter_effect_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["variant", "bin_lo", "bin_hi", "attempts", "mean_local", "mpc", "gs"])
    for name, lo, hi, attempts, mean_local, mpc, gs in rows:
        w.writerow(
            [name, lo, hi, attempts, f"{mean_local:.6f}", f"{mpc:.6f}", f"{gs:.6f}"]
        )
    return buf.getvalue()
