"""Pixel-wise visual clutter estimation.

Combines local variability of luminance contrast, color and orientation
features of a CIE Lab image into a non-negative per-pixel clutter field,
plus global (whole image) and local (grasp-pose disc) mean scores.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy import ndimage


class ImageTooSmall(Exception):
    pass


class OutOfBounds(Exception):
    pass


@dataclass(frozen=True)
class FcmParams:
    sigma_dog: tuple = (2.0, 3.2)  # classic 1:1.6 center/surround ratio, px
    sigma_orient: float = 2.0  # oriented derivative-of-Gaussian scale, px
    sigma_window: float = 5.0  # local (co)variance window, px
    w_color: float = 0.3  # chrominance down-weighting
    w_orient: float = 1.0
    # typical full-swing response magnitudes on a black/white edge,
    # so each combined term is O(1)
    norm_contrast: float = 25.0
    norm_color: float = 60.0
    norm_orient: float = 25.0


# -- sRGB (D65) -> CIE Lab ----------------------------------------------

_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# reference white taken from the matrix itself so pure white maps to
# exactly L=100, a=b=0
_WHITE_D65 = _RGB_TO_XYZ.sum(axis=1)


def rgb_to_lab(image):
    """sRGB in [0,1] -> CIE Lab (L in [0,100]) under D65."""
    rgb = np.asarray(image, dtype=np.float64)
    linear = np.where(
        rgb > 0.04045, ((rgb + 0.055) / 1.055) ** 2.4, rgb / 12.92
    )
    xyz = linear @ _RGB_TO_XYZ.T
    t = xyz / _WHITE_D65
    eps = 216.0 / 24389.0
    kappa = 24389.0 / 27.0
    f = np.where(t > eps, np.cbrt(t), (kappa * t + 16.0) / 116.0)
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def _blur(img, sigma):
    return ndimage.gaussian_filter(img, sigma, mode="reflect", truncate=3.0)


def _local_var(feature, sigma_w):
    """Point-wise variance under a Gaussian window, clamped at 0.

    The feature is centered on its global mean first: variance is shift
    invariant, and the centered form returns exactly zero on constant
    input instead of catastrophic-cancellation residue.
    """
    f = feature - feature.mean()
    m = _blur(f, sigma_w)
    v = _blur(f * f, sigma_w) - m * m
    return np.maximum(v, 0.0)


def compute_clutter_map(image, params=None):
    """Per-pixel clutter from local feature variability.

    Features: DoG luminance contrast, four oriented first-derivative-of-
    Gaussian responses (0/90/45/135 deg) of L, and the a/b chrominance
    channels; each contributes the square root of its windowed variance,
    normalized by a fixed full-swing constant.
    """
    params = params or FcmParams()
    image = np.asarray(image, dtype=np.float64)
    if image.shape[0] < 16 or image.shape[1] < 16:
        raise ImageTooSmall(f"need at least 16x16, got {image.shape[:2]}")
    lab = rgb_to_lab(image)
    L, a, b = lab[..., 0], lab[..., 1], lab[..., 2]

    s1, s2 = params.sigma_dog
    contrast = _blur(L, s1) - _blur(L, s2)

    so = params.sigma_orient
    dx = ndimage.gaussian_filter(L, so, order=(0, 1), mode="reflect", truncate=3.0)
    dy = ndimage.gaussian_filter(L, so, order=(1, 0), mode="reflect", truncate=3.0)

    sw = params.sigma_window
    out = np.sqrt(_local_var(contrast, sw)) / params.norm_contrast
    out += (
        params.w_color
        * np.sqrt(_local_var(a, sw) + _local_var(b, sw))
        / params.norm_color
    )
    # variances of the diagonal responses (dx +/- dy)/sqrt(2) follow from
    # var(dx), var(dy) and the windowed covariance, saving three filters
    mx = _blur(dx, sw)
    my = _blur(dy, sw)
    vx = np.maximum(_blur(dx * dx, sw) - mx * mx, 0.0)
    vy = np.maximum(_blur(dy * dy, sw) - my * my, 0.0)
    cov = _blur(dx * dy, sw) - mx * my
    half = 0.5 * (vx + vy)
    orient_sum = (
        np.sqrt(vx)
        + np.sqrt(vy)
        + np.sqrt(np.maximum(half + cov, 0.0))
        + np.sqrt(np.maximum(half - cov, 0.0))
    )
    out += (params.w_orient / 4.0) * orient_sum / params.norm_orient
    return out


def global_score(clutter_map):
    """Mean clutter over the whole image."""
    m = np.asarray(clutter_map)
    if m.size == 0:
        raise ValueError("empty clutter map")
    return float(m.mean())


def disc_mask(shape, center, opening_px):
    h, w = shape
    cx, cy = center
    ys, xs = np.ogrid[:h, :w]
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= (opening_px / 2.0) ** 2


def local_score(clutter_map, center, opening_px):
    """Mean clutter over the gripper-opening disc around a grasp center.

    center is (x, y) in pixels; the disc is clipped to the image bounds.
    """
    m = np.asarray(clutter_map)
    h, w = m.shape
    cx, cy = center
    if not (0 <= cx < w and 0 <= cy < h):
        raise OutOfBounds(f"center {center} outside {w}x{h} image")
    if opening_px < 2:
        raise ValueError("opening_px must be >= 2")
    mask = disc_mask(m.shape, center, opening_px)
    return float(m[mask].mean())


def save_clutter_pgm(clutter_map, path):
    """16-bit PGM plus a sidecar JSON recording the linear scale."""
    m = np.asarray(clutter_map, dtype=np.float64)
    mmax = float(m.max())
    scale = 65535.0 / mmax if mmax > 0 else 1.0
    from .sim import write_pgm16

    write_pgm16(m, path, scale=scale)
    sidecar = {
        "scale": scale,
        "min": float(m.min()),
        "max": mmax,
        "global_score": global_score(m),
    }
    with open(str(path) + ".json", "w") as f:
        json.dump(sidecar, f, indent=2)
