"""Pure numpy/scipy fallbacks for the compiled kernels in _kernels.pyx."""

import numpy as np
from scipy import ndimage


def edt_sq(obstacles):
    """Exact squared Euclidean distance to the nearest nonzero pixel (int64)."""
    obstacles = np.asarray(obstacles, dtype=bool)
    d = ndimage.distance_transform_edt(~obstacles)
    # distances are sqrt of small integers, so squaring round-trips exactly
    return np.rint(d * d).astype(np.int64)


def convex_coverage(xs, ys, verts):
    """Boolean coverage of pixel centers by a convex CCW polygon (uint8)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    verts = np.asarray(verts, dtype=np.float64)
    edges = np.roll(verts, -1, axis=0) - verts
    px = xs[None, :, None] - verts[:, 0][None, None, :]  # (1, w, n)
    py = ys[:, None, None] - verts[:, 1][None, None, :]  # (h, 1, n)
    cross = edges[:, 0] * py - edges[:, 1] * px
    return (cross >= 0.0).all(axis=2).astype(np.uint8)
