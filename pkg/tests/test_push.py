"""Push planning: distance field, freest point, backward start search."""

import numpy as np
import pytest

from conftest import box, make_scene, render_pair
from declutter import grasp, push, sim


def test_distance_transform_empty_mask_center():
    field = push.distance_transform(np.zeros((5, 5), dtype=bool))
    assert field[2, 2] == pytest.approx(3.0)  # virtual ring just outside
    assert field[0, 0] == pytest.approx(1.0)


def test_distance_transform_all_obstacles():
    field = push.distance_transform(np.ones((6, 6), dtype=bool))
    assert (field == 0.0).all()


def test_distance_transform_is_lipschitz():
    rng = np.random.default_rng(2)
    mask = rng.random((24, 24)) < 0.1
    field = push.distance_transform(mask)
    assert (np.abs(np.diff(field, axis=0)) <= 1.0 + 1e-9).all()
    assert (np.abs(np.diff(field, axis=1)) <= 1.0 + 1e-9).all()
    assert (field[mask] == 0.0).all()


def test_distance_transform_brute_force_with_boundary_ring():
    rng = np.random.default_rng(21)
    for _ in range(20):
        mask = rng.random((16, 16)) < 0.15
        got = push.distance_transform_squared(mask)
        h, w = mask.shape
        padded = np.ones((h + 2, w + 2), dtype=bool)
        padded[1:-1, 1:-1] = mask
        oy, ox = np.nonzero(padded)
        for y in range(h):
            for x in range(w):
                want = np.min((ox - (x + 1)) ** 2 + (oy - (y + 1)) ** 2)
                assert got[y, x] == want


def test_freest_point_empty_mask_center():
    field = push.distance_transform(np.zeros((7, 7), dtype=bool))
    assert push.freest_point(field) == (3, 3)
    even = push.distance_transform(np.zeros((8, 8), dtype=bool))
    # four-way tie on the central block resolves to the smallest row-major index
    assert push.freest_point(even) == (3, 3)


def test_freest_point_is_argmax():
    rng = np.random.default_rng(14)
    mask = rng.random((20, 20)) < 0.2
    field = push.distance_transform(mask)
    fx, fy = push.freest_point(field)
    assert field[fy, fx] == field.max()


def test_freest_point_away_from_corner_blob():
    mask = np.zeros((30, 30), dtype=bool)
    mask[:8, :8] = True
    fx, fy = push.freest_point(push.distance_transform(mask))
    assert fx > 14 and fy > 14


def test_plan_push_geometry(cam):
    scene = make_scene([box(0, 0.20, 0.32)])
    rgb, depth, background = render_pair(scene, cam)
    mask = grasp.depth_filter(depth, background)
    center = tuple(cam.world_to_px(np.array([[0.20, 0.32]]))[0])
    action = push.plan_push(depth, mask, center)
    start = np.asarray(action.start)
    end = np.asarray(action.end)
    c = np.asarray(center)
    # collinear: start lies on the line through (center, end), behind center
    d = end - c
    d /= np.linalg.norm(d)
    perp = (start - c) - ((start - c) @ d) * d
    assert np.linalg.norm(perp) < 1.0
    assert (start - c) @ d < 0.0
    # depth condition exactly as specified
    zc = depth[int(round(c[1])), int(round(c[0]))]
    zs = depth[int(round(start[1])), int(round(start[0]))]
    assert zs >= zc + 0.02 - 1e-9
    assert action.entry_depth == pytest.approx(zs - 0.001, abs=1e-6)


def test_plan_push_first_probe_wins(cam):
    scene = make_scene([box(0, 0.32, 0.32)])
    rgb, depth, background = render_pair(scene, cam)
    mask = grasp.depth_filter(depth, background)
    # pick a center on the object edge so the first backward probe is table
    ys, xs = np.nonzero(mask)
    center = (float(xs.max()), float(ys[xs == xs.max()][0]))
    action = push.plan_push(depth, mask, center, step_px=2.0)
    dist = np.linalg.norm(np.asarray(action.start) - np.asarray(center))
    assert dist == pytest.approx(2.0, abs=1e-9)


def test_plan_push_no_entry_point():
    depth = np.full((32, 32), 0.55)  # wall-to-wall objects: no deeper probe
    mask = np.ones((32, 32), dtype=bool)
    mask[16, 16] = False
    with pytest.raises(push.NoEntryPoint):
        push.plan_push(depth, mask, (2.0, 2.0))


def test_push_action_json_round_trip():
    a = push.PushAction(start=(1.5, 2.0), end=(30.0, 31.0), entry_depth=0.59)
    assert push.PushAction.from_json(a.to_json()) == a
