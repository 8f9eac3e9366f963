import numpy as np
import pytest

from declutter import sim


@pytest.fixture(scope="session")
def cam():
    return sim.CameraModel()


@pytest.fixture(scope="session")
def gripper():
    return sim.GripperParams()


def make_scene(objects, **kwargs):
    return sim.Scene(objects=list(objects), **kwargs)


def box(obj_id, x, y, size=(0.04, 0.04), yaw=0.0, height=0.05, color=(0.9, 0.1, 0.1)):
    return sim.SceneObject(
        id=obj_id,
        shape=sim.ShapeSpec("box", size=size),
        pose=(x, y, yaw),
        height=height,
        color=color,
    )


@pytest.fixture
def single_box_scene():
    return make_scene([box(0, 0.32, 0.32)])


@pytest.fixture
def empty_scene():
    return make_scene([])


def render_pair(scene, cam):
    rgb, depth = sim.render(scene, cam)
    background = sim.render_background(scene, cam)
    return rgb, depth, background


def max_pairwise_penetration(scene):
    from declutter import geometry as geo

    worst = 0.0
    objs = scene.objects
    for i in range(len(objs)):
        for j in range(i + 1, len(objs)):
            worst = max(
                worst, geo.penetration_depth(objs[i].footprint, objs[j].footprint)
            )
    return worst


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
