"""Aggregate metrics over episode logs: grasp success rate (GS), multi-pick
count (MPC), GS with multi-picks counted as failures (GS_wm) and mean picks
per hour (MPPH) under configurable simulated action durations."""

from dataclasses import dataclass, field

import numpy as np

BINS = ((1, 5), (6, 10), (11, 15), (16, 20))


class NoAttempts(Exception):
    pass


@dataclass(frozen=True)
class Durations:
    t_grasp_s: float = 20.0
    t_push_s: float = 15.0
    t_perceive_s: float = 2.0


@dataclass
class BinRow:
    lo: int
    hi: int
    attempts: int
    mean_local: float
    mpc: float
    gs: float


@dataclass
class MetricsReport:
    gs: float  # % successful grasps over grasp attempts
    mpc: float  # % multi-pick grasps
    gs_wm: float  # % successes with multi-picks counted as failures
    mpph: float  # successful picks per simulated hour
    attempts: int  # grasp attempts
    by_bin: list = field(default_factory=list)


def _grasp_records(logs):
    for log in logs:
        for r in log.records:
            if r["action"] == "grasp":
                yield r


def compute_metrics(logs, durations=None):
    """Fold episode logs into a MetricsReport; raises NoAttempts if no
    grasp was ever attempted."""
    durations = durations or Durations()
    grasps = list(_grasp_records(logs))
    attempts = len(grasps)
    if attempts == 0:
        raise NoAttempts("no grasp attempts in the given logs")
    successes = sum(1 for r in grasps if r["grasp_success"])
    multi = sum(1 for r in grasps if r["multi_pick"])
    total_time = 0.0
    for log in logs:
        for r in log.records:
            total_time += durations.t_perceive_s
            if r["action"] == "grasp":
                total_time += durations.t_grasp_s
            elif r["action"] == "push":
                total_time += durations.t_push_s
    report = MetricsReport(
        gs=100.0 * successes / attempts,
        mpc=100.0 * multi / attempts,
        gs_wm=100.0 * (successes - multi) / attempts,
        mpph=3600.0 * successes / total_time,
        attempts=attempts,
    )
    for lo, hi in BINS:
        rows = [r for r in grasps if lo <= r["objects_before"] <= hi]
        if not rows:
            continue
        locals_ = [
            r["local_score_of_target"]
            for r in rows
            if r["local_score_of_target"] is not None
        ]
        report.by_bin.append(
            BinRow(
                lo=lo,
                hi=hi,
                attempts=len(rows),
                mean_local=float(np.mean(locals_)) if locals_ else float("nan"),
                mpc=100.0 * sum(r["multi_pick"] for r in rows) / len(rows),
                gs=100.0 * sum(r["grasp_success"] for r in rows) / len(rows),
            )
        )
    return report
