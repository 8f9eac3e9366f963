"""Clutter map: Lab conversion, feature-variability field, scores."""

import json

import numpy as np
import pytest

from conftest import box, make_scene
from declutter import clutter, sim


def scalar_srgb_to_lab(r, g, b):
    """Independent scalar evaluation of the sRGB(D65) -> Lab chain."""

    def lin(u):
        return ((u + 0.055) / 1.055) ** 2.4 if u > 0.04045 else u / 12.92

    rl, gl, bl = lin(r), lin(g), lin(b)
    x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl
    y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl
    z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl
    xn, yn, zn = 0.95047, 1.0, 1.08883

    def f(t):
        return t ** (1.0 / 3.0) if t > 216.0 / 24389.0 else (24389.0 / 27.0 * t + 16.0) / 116.0

    fx, fy, fz = f(x / xn), f(y / yn), f(z / zn)
    return 116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)


def test_lab_black_and_white():
    lab = clutter.rgb_to_lab(np.array([[[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]]))
    np.testing.assert_allclose(lab[0, 0], [0.0, 0.0, 0.0], atol=1e-9)
    assert lab[0, 1, 0] == pytest.approx(100.0, abs=1e-6)
    assert abs(lab[0, 1, 1]) < 0.01 and abs(lab[0, 1, 2]) < 0.01


def test_lab_matches_scalar_oracle():
    rng = np.random.default_rng(2)
    colors = np.vstack([[[1.0, 0.0, 0.0]], rng.random((20, 3))])
    lab = clutter.rgb_to_lab(colors[None, :, :])[0]
    for (r, g, b), got in zip(colors, lab):
        want = scalar_srgb_to_lab(r, g, b)
        np.testing.assert_allclose(got, want, atol=1e-3)


def test_clutter_map_zero_on_constant():
    for c in ((0.5, 0.5, 0.5), (0.9, 0.2, 0.4)):
        img = np.empty((32, 32, 3))
        img[:] = c
        cmap = clutter.compute_clutter_map(img)
        assert cmap.shape == (32, 32)
        assert np.abs(cmap).max() <= 1e-9


def test_clutter_map_nonnegative_and_finite():
    rng = np.random.default_rng(0)
    img = rng.random((40, 40, 3))
    cmap = clutter.compute_clutter_map(img)
    assert (cmap >= 0.0).all()
    assert np.isfinite(cmap).all()


def test_clutter_map_localized_at_an_edge():
    img = np.zeros((64, 64, 3))
    img[:, 32:] = 1.0
    cmap = clutter.compute_clutter_map(img)
    sw = clutter.FcmParams().sigma_window
    assert cmap[:, 30:34].min() > 0.0
    far = np.concatenate([cmap[:, : int(32 - 6 * sw)], cmap[:, int(32 + 6 * sw) :]], axis=1)
    assert far.max() < 1e-6


def test_clutter_map_rotation_equivariant():
    rng = np.random.default_rng(4)
    img = rng.random((48, 48, 3))
    a = np.rot90(clutter.compute_clutter_map(img))
    b = clutter.compute_clutter_map(np.rot90(img, axes=(0, 1)))
    assert np.abs(a - b).max() <= 1e-6


def test_heap_scores_above_empty_table(cam):
    margins = []
    for seed in range(5):
        heap = sim.spawn_heap(seed, 20)
        empty = heap.with_objects([])
        g_heap = clutter.global_score(clutter.compute_clutter_map(sim.render(heap, cam)[0]))
        g_empty = clutter.global_score(clutter.compute_clutter_map(sim.render(empty, cam)[0]))
        margins.append(g_heap - g_empty)
    assert min(margins) > 0.0


def test_adding_isolated_object_does_not_lower_global(cam):
    base = make_scene([box(0, 0.20, 0.20)])
    more = make_scene([box(0, 0.20, 0.20), box(1, 0.50, 0.50, color=(0.2, 0.4, 0.9))])
    g0 = clutter.global_score(clutter.compute_clutter_map(sim.render(base, cam)[0]))
    g1 = clutter.global_score(clutter.compute_clutter_map(sim.render(more, cam)[0]))
    assert g1 >= g0 - 1e-9


def test_image_too_small():
    with pytest.raises(clutter.ImageTooSmall):
        clutter.compute_clutter_map(np.zeros((8, 8, 3)))


def test_global_score_is_the_mean():
    rng = np.random.default_rng(1)
    m = rng.random((17, 23))
    naive = float(sum(float(v) for v in m.ravel()) / m.size)
    assert clutter.global_score(m) == pytest.approx(naive, abs=1e-12)
    assert clutter.global_score(np.full((4, 4), 0.7)) == pytest.approx(0.7)
    with pytest.raises(ValueError):
        clutter.global_score(np.empty((0, 0)))


def test_local_score_uniform_map():
    m = np.full((50, 50), 0.3)
    assert clutter.local_score(m, (25, 25), 20) == pytest.approx(0.3)


def test_local_score_matches_disc_enumeration():
    rng = np.random.default_rng(8)
    m = rng.random((40, 40))
    for center in ((20, 20), (3, 35), (0, 0)):  # includes border-clipped discs
        opening = 14
        total, count = 0.0, 0
        for y in range(40):
            for x in range(40):
                if (x - center[0]) ** 2 + (y - center[1]) ** 2 <= (opening / 2.0) ** 2:
                    total += m[y, x]
                    count += 1
        assert clutter.local_score(m, center, opening) == pytest.approx(total / count)


def test_local_score_bounds_and_errors():
    rng = np.random.default_rng(3)
    m = rng.random((30, 30))
    s = clutter.local_score(m, (10, 12), 16)
    assert m.min() <= s <= m.max()
    with pytest.raises(clutter.OutOfBounds):
        clutter.local_score(m, (50, 10), 16)
    with pytest.raises(ValueError):
        clutter.local_score(m, (10, 10), 1)


def test_clutter_pgm_sidecar(tmp_path):
    rng = np.random.default_rng(5)
    m = rng.random((20, 20)) * 0.2
    path = tmp_path / "c.pgm"
    clutter.save_clutter_pgm(m, path)
    side = json.loads((tmp_path / "c.pgm.json").read_text())
    assert side["max"] == pytest.approx(float(m.max()))
    assert side["global_score"] == pytest.approx(clutter.global_score(m))
    back = sim.read_pgm16(path, scale=side["scale"])
    np.testing.assert_allclose(back, m, atol=1.05 / side["scale"])
