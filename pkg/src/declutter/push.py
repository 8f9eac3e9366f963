"""Linear push planning: distance transform over free space, freest-point
selection, and a backward start-point search along the push vector."""

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grasp import _bilinear


class NoEntryPoint(Exception):
    """Backward walk exited the image before finding a gripper entry point."""


@dataclass(frozen=True)
class PushAction:
    start: tuple  # (x, y) px, may be fractional
    end: tuple  # (x, y) px, the freest point
    entry_depth: float  # gripper tip depth during the sweep, m

    def to_json(self):
        return {
            "start": [float(self.start[0]), float(self.start[1])],
            "end": [float(self.end[0]), float(self.end[1])],
            "entry_depth": self.entry_depth,
        }

    @staticmethod
    def from_json(d):
        return PushAction(tuple(d["start"]), tuple(d["end"]), d["entry_depth"])


def distance_transform_squared(mask):
    """Exact squared Euclidean distance (int64) to the nearest obstacle,
    where obstacles are the set pixels plus a virtual 1-px ring just
    outside the image border."""
    mask = np.asarray(mask).astype(bool)
    h, w = mask.shape
    padded = np.ones((h + 2, w + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = mask
    return kernels.edt_sq(padded)[1:-1, 1:-1]


def distance_transform(mask):
    """Euclidean distances in pixels (see distance_transform_squared)."""
    return np.sqrt(distance_transform_squared(mask).astype(np.float64))


def freest_point(field):
    """Argmax pixel (x, y); ties broken by smallest row-major index."""
    field = np.asarray(field)
    if field.size == 0:
        raise ValueError("empty distance field")
    idx = int(np.argmax(field))
    cy, cx = divmod(idx, field.shape[1])
    return (cx, cy)


def plan_push(depth, mask, selected_center, entry_delta=0.02, step_px=2.0,
              probe_margin=0.001):
    """Push from behind the selected cluttered region toward the freest point.

    Walks backward from selected_center along the push vector in step_px
    increments until a probe point sits at least entry_delta meters deeper
    than the center (bare table the gripper tip can descend into).
    """
    depth = np.asarray(depth, dtype=np.float64)
    h, w = depth.shape
    end = freest_point(distance_transform(mask))
    c = np.asarray(selected_center, dtype=float)
    d = np.asarray(end, dtype=float) - c
    norm = float(np.linalg.norm(d))
    if norm < 1e-9:
        raise NoEntryPoint("freest point coincides with the selected center")
    dhat = d / norm
    zc = float(_bilinear(depth, np.array([c[0]]), np.array([c[1]]))[0])
    i = 1
    while True:
        p = c - i * step_px * dhat
        if not (0.0 <= p[0] <= w - 1 and 0.0 <= p[1] <= h - 1):
            raise NoEntryPoint("walk exited the image without a qualifying probe")
        zp = float(_bilinear(depth, np.array([p[0]]), np.array([p[1]]))[0])
        if zp >= zc + entry_delta:
            return PushAction(
                start=(float(p[0]), float(p[1])),
                end=end,
                entry_depth=zp - probe_margin,
            )
        i += 1
