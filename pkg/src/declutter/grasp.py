"""Grasp pose generation and ranking from depth images.

Pipeline: depth filtering against the known background, cluster-count
estimation from area spread and global clutter, k-means clustering of the
object pixels, and per-cluster pose selection ranked by a clearance score
(GDI): the fraction of sampled finger-region points whose depth clears the
pose center by at least the height-clearance threshold.
"""

from dataclasses import dataclass, field

import numpy as np


class ShapeMismatch(Exception):
    pass


class RankDeficient(Exception):
    pass


class TooFewPixels(Exception):
    pass


class RectangleOutOfBounds(Exception):
    pass


class NoCandidates(Exception):
    """Depth filter found nothing: the workspace is empty."""


@dataclass
class GraspPose:
    center: tuple  # (x, y) px
    angle: float  # closing-axis direction, rad in [0, pi)
    opening_px: float
    gdi: float = 0.0
    gdi_fine: float = 0.0  # clearance including the band inward of lct
    local_clutter: float = None
    isolation_px: float = None  # distance to the nearest other candidate


@dataclass(frozen=True)
class GdiParams:
    lct: float = 16.0  # lateral-clearance-threshold, px
    hct: float = 0.02  # height-clearance-threshold, m
    finger_width_px: int = 9  # matches the 0.02 m finger at 400 px/m
    samples_per_side: int = 10


@dataclass(frozen=True)
class KModel:
    beta: tuple  # (b0, b1, b2)
    k_max: int = 25

    def to_json(self):
        return {"beta": list(self.beta), "k_max": self.k_max}

    @staticmethod
    def from_json(d):
        return KModel(beta=tuple(d["beta"]), k_max=d["k_max"])


ANGLE_GRID = tuple(np.deg2rad(np.arange(0, 180, 15)))


def depth_filter(depth, background, delta=0.01):
    """Mask of pixels at least `delta` meters above the background."""
    depth = np.asarray(depth)
    background = np.asarray(background)
    if depth.shape != background.shape:
        raise ShapeMismatch(f"{depth.shape} vs {background.shape}")
    return (background - depth) >= delta


def estimate_area_spread(mask):
    """Fraction of object (set) pixels."""
    mask = np.asarray(mask)
    if mask.size == 0:
        raise ValueError("empty mask")
    return float(np.count_nonzero(mask)) / mask.size


def fit_k_model(samples, k_max=25):
    """Least squares for k = b0 + b1*A + b2*G over (A, G, k) samples."""
    samples = list(samples)
    if len(samples) < 3:
        raise ValueError("need at least 3 samples")
    X = np.array([[1.0, a, g] for a, g, _ in samples])
    y = np.array([k for _, _, k in samples], dtype=float)
    if np.linalg.matrix_rank(X) < 3:
        raise RankDeficient("collinear (A, G) inputs")
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return KModel(beta=tuple(float(b) for b in beta), k_max=k_max)


def estimate_k(area, g_cs, model):
    """Rounded regression prediction, clamped to [1, k_max]."""
    b0, b1, b2 = model.beta
    k = round(b0 + b1 * area + b2 * g_cs)
    return int(min(max(k, 1), model.k_max))


def _kmeans_pp_init(points, k, rng):
    n = len(points)
    centers = np.empty((k, 2))
    chosen = np.zeros(n, dtype=bool)
    first = int(rng.integers(n))
    centers[0] = points[first]
    chosen[first] = True
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining points coincide with a center: take the first
            # unchosen point in row-major order
            idx = int(np.flatnonzero(~chosen)[0])
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[i] = points[idx]
        chosen[idx] = True
        d2 = np.minimum(d2, np.sum((points - centers[i]) ** 2, axis=1))
    return centers


def cluster_candidates(
    mask, k, seed, max_iter=50, shift_tol=0.5, return_history=False
):
    """Lloyd's k-means with k-means++ seeding over set-pixel coordinates.

    Returns centroids snapped to the nearest set pixel, deterministic in
    seed. With return_history=True, also the per-iteration within-cluster
    sum of squares.
    """
    mask = np.asarray(mask).astype(bool)
    ys, xs = np.nonzero(mask)
    points = np.column_stack([xs, ys]).astype(np.float64)
    n = len(points)
    if n < k:
        raise TooFewPixels(f"{n} set pixels < k={k}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(points, k, rng)
    history = []
    pp2 = np.sum(points * points, axis=1)
    for _ in range(max_iter):
        d2 = pp2[:, None] - 2.0 * (points @ centers.T) + np.sum(centers * centers, axis=1)
        np.maximum(d2, 0.0, out=d2)
        assign = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(n), assign].sum()))
        counts = np.bincount(assign, minlength=k)
        sums_x = np.bincount(assign, weights=points[:, 0], minlength=k)
        sums_y = np.bincount(assign, weights=points[:, 1], minlength=k)
        new_centers = centers.copy()
        nonempty = counts > 0
        new_centers[nonempty, 0] = sums_x[nonempty] / counts[nonempty]
        new_centers[nonempty, 1] = sums_y[nonempty] / counts[nonempty]
        shift = np.max(np.linalg.norm(new_centers - centers, axis=1))
        centers = new_centers
        if shift < shift_tol:
            break
    # snap to the nearest set pixel; ties -> smaller row-major index
    snapped = []
    order = ys.astype(np.int64) * mask.shape[1] + xs.astype(np.int64)
    for c in centers:
        d2 = (xs - c[0]) ** 2 + (ys - c[1]) ** 2
        best = np.lexsort((order, d2))[0]
        snapped.append((int(xs[best]), int(ys[best])))
    if return_history:
        return snapped, history
    return snapped


def refine_centers(mask, centers, radius):
    """Move each candidate center to the most interior set pixel nearby.

    A centroid of a cluster spanning two separated blobs snaps onto a blob
    edge facing the gap between them; closing the jaws there straddles both
    blobs and picks two objects at once. The deepest point of the
    interior-distance field within `radius` pixels sits well inside a
    single blob, so the grasp centers on one object. Centers that coincide
    after refinement collapse to one.
    """
    from .push import distance_transform_squared

    mask = np.asarray(mask).astype(bool)
    interior = distance_transform_squared(~mask)
    h, w = mask.shape
    r = max(1, int(round(radius)))
    refined = []
    for cx, cy in centers:
        x0, x1 = max(0, cx - r), min(w, cx + r + 1)
        y0, y1 = max(0, cy - r), min(h, cy + r + 1)
        win = interior[y0:y1, x0:x1] * mask[y0:y1, x0:x1]
        ys, xs = np.nonzero(win)
        if len(xs) == 0:
            best = (cx, cy)
        else:
            depth_score = win[ys, xs]
            d2 = (xs + x0 - cx) ** 2 + (ys + y0 - cy) ** 2
            order = (ys + y0).astype(np.int64) * w + (xs + x0)
            i = np.lexsort((order, d2, -depth_score))[0]
            best = (int(xs[i] + x0), int(ys[i] + y0))
        if best not in refined:
            refined.append(best)
    return refined


def _bilinear(img, x, y):
    x0 = np.floor(x).astype(int)
    y0 = np.floor(y).astype(int)
    h, w = img.shape
    x0 = np.clip(x0, 0, w - 2)
    y0 = np.clip(y0, 0, h - 2)
    fx = x - x0
    fy = y - y0
    return (
        img[y0, x0] * (1 - fx) * (1 - fy)
        + img[y0, x0 + 1] * fx * (1 - fy)
        + img[y0 + 1, x0] * (1 - fx) * fy
        + img[y0 + 1, x0 + 1] * fx * fy
    )


def _base_offsets(params, opening_px):
    """Axis-aligned sample offsets (n, 2): (along closing axis, across)."""
    along = np.linspace(params.lct, opening_px / 2.0, params.samples_per_side)
    fw = params.finger_width_px
    across = np.arange(fw) - (fw - 1) / 2.0
    t, r = np.meshgrid(along, across)
    t = t.ravel()
    r = r.ravel()
    return np.concatenate([t, -t]), np.concatenate([r, r])


def gdi_sample_points(center, angle, params, opening_px):
    """Sample grid on the two rectangle ends: (n, 2) pixel coordinates."""
    cx, cy = center
    u = np.array([np.cos(angle), np.sin(angle)])
    v = np.array([-u[1], u[0]])
    t, r = _base_offsets(params, opening_px)
    return np.column_stack(
        [cx + t * u[0] + r * v[0], cy + t * u[1] + r * v[1]]
    )


def compute_gdi(depth, center, angle, params=None, opening_px=40.0):
    """Fraction of finger-region samples with depth(center) + hct clearance."""
    params = params or GdiParams()
    depth = np.asarray(depth, dtype=np.float64)
    h, w = depth.shape
    pts = gdi_sample_points(center, angle, params, opening_px)
    if (
        pts[:, 0].min() < 0
        or pts[:, 1].min() < 0
        or pts[:, 0].max() > w - 1
        or pts[:, 1].max() > h - 1
    ):
        raise RectangleOutOfBounds("grasp rectangle exits the image")
    zc = float(_bilinear(depth, np.array([float(center[0])]), np.array([float(center[1])]))[0])
    z = _bilinear(depth, pts[:, 0], pts[:, 1])
    valid = z >= zc + params.hct
    return float(np.count_nonzero(valid)) / len(pts)


def plan_grasps(
    depth,
    background,
    k_model=None,
    g_cs=0.0,
    params=None,
    opening_px=40.0,
    n_top=3,
    seed=0,
    delta=0.01,
    k_fixed=None,
    refine=False,
):
    """Rank grasp poses by GDI; returns the best n_top (all if None).

    k comes from `k_fixed` when given, otherwise from the regression model.
    With refine=True, candidate centers move to the most interior mask
    pixel nearby (see refine_centers). Per centroid, the best of 12
    discretized closing angles is kept (ties favor the smaller angle);
    centroids whose rectangle exits the image at every angle are skipped.
    """
    params = params or GdiParams()
    mask = depth_filter(depth, background, delta)
    n_set = int(np.count_nonzero(mask))
    if n_set == 0:
        raise NoCandidates("empty depth-filtered mask")
    if k_fixed is not None:
        k = int(k_fixed)
    else:
        area = estimate_area_spread(mask)
        k = estimate_k(area, g_cs, k_model)
    k = min(k, n_set)
    centroids = cluster_candidates(mask, k, seed)
    if refine:
        centroids = refine_centers(mask, centroids, params.lct)
    h, w = mask.shape
    depth = np.asarray(depth, dtype=np.float64)

    # one bilinear lookup for every (centroid, angle) sample grid; an
    # extra band of samples inward of lct acts as an angle tie-breaker
    # (it prefers the closing axis with the smallest projected extent,
    # which the coarse band cannot see on small objects)
    t, r = _base_offsets(params, opening_px)
    n_main = len(t)
    inner = np.linspace(params.lct / 2.0, params.lct, params.samples_per_side, endpoint=False)
    fw = params.finger_width_px
    across = np.arange(fw) - (fw - 1) / 2.0
    ti, ri = np.meshgrid(inner, across)
    t = np.concatenate([t, ti.ravel(), -ti.ravel()])
    r = np.concatenate([r, ri.ravel(), ri.ravel()])
    angles = np.asarray(ANGLE_GRID)
    cos, sin = np.cos(angles), np.sin(angles)
    off_x = t[None, :] * cos[:, None] + r[None, :] * (-sin[:, None])  # (12, n)
    off_y = t[None, :] * sin[:, None] + r[None, :] * cos[:, None]
    centers = np.asarray(centroids, dtype=np.float64)  # (k, 2)
    px = centers[:, 0][:, None, None] + off_x[None, :, :]  # (k, 12, n)
    py = centers[:, 1][:, None, None] + off_y[None, :, :]
    in_bounds = (
        (px[..., :n_main].min(axis=2) >= 0)
        & (py[..., :n_main].min(axis=2) >= 0)
        & (px[..., :n_main].max(axis=2) <= w - 1)
        & (py[..., :n_main].max(axis=2) <= h - 1)
    )  # (k, 12)
    zc = _bilinear(depth, centers[:, 0], centers[:, 1])  # (k,)
    np.clip(px, 0, w - 1, out=px)
    np.clip(py, 0, h - 1, out=py)
    z = _bilinear(depth, px.ravel(), py.ravel()).reshape(px.shape)
    valid = z >= zc[:, None, None] + params.hct
    gdis = np.count_nonzero(valid[..., :n_main], axis=2) / n_main  # (k, 12)
    fine = np.count_nonzero(valid, axis=2) / valid.shape[2]  # (k, 12)

    poses = []
    for ci, center in enumerate(centroids):
        best = None
        for ai, angle in enumerate(ANGLE_GRID):
            if not in_bounds[ci, ai]:
                continue
            g = float(gdis[ci, ai])
            f = float(fine[ci, ai])
            if (
                best is None
                or g > best[0] + 1e-15
                or (g > best[0] - 1e-15 and f > best[1] + 1e-15)
            ):
                best = (g, f, angle)
        if best is None:
            continue
        poses.append(
            GraspPose(
                center=center,
                angle=float(best[2]),
                opening_px=opening_px,
                gdi=best[0],
                gdi_fine=best[1],
            )
        )
    poses.sort(key=lambda p: (-p.gdi, p.center[1] * w + p.center[0]))
    return poses if n_top is None else poses[:n_top]


def pose_to_json(pose):
    return {
        "cx": pose.center[0],
        "cy": pose.center[1],
        "angle_deg": float(np.rad2deg(pose.angle)),
        "opening_px": pose.opening_px,
        "gdi": pose.gdi,
    }
