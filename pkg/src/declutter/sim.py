"""Deterministic top-down 2D workspace simulator.

Rigid convex objects with a scalar height sit on a table viewed by an
orthographic overhead camera. Scenes are value objects: every action
returns a new Scene, so independent episodes can run in parallel.
"""

import json
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from . import geometry as geo
from . import kernels

PENETRATION_TOL = 1e-4  # m, max allowed pairwise footprint overlap
JAM_TWIST = np.deg2rad(4.0)  # rad, rotation a jammed grasp leaves behind
CIRCLE_SEGMENTS = 24


class PlacementFailure(Exception):
    """Heap sampler exhausted its rejection budget."""


class NonConvergence(Exception):
    """Push separation loop exceeded its iteration cap."""


@dataclass(frozen=True)
class ShapeSpec:
    """Parametric footprint: 'box' (size), 'circle' (radius) or 'polygon' (vertices)."""

    kind: str
    size: tuple = None
    radius: float = None
    vertices: tuple = None

    def local_polygon(self):
        if self.kind == "box":
            w, l = self.size
            return np.array(
                [[-w / 2, -l / 2], [w / 2, -l / 2], [w / 2, l / 2], [-w / 2, l / 2]]
            )
        if self.kind == "circle":
            return geo.regular_polygon(self.radius, CIRCLE_SEGMENTS)
        if self.kind == "polygon":
            return np.asarray(self.vertices, dtype=float)
        raise ValueError(f"unknown shape kind {self.kind!r}")

    def to_json(self):
        if self.kind == "box":
            return {"kind": "box", "size": list(self.size)}
        if self.kind == "circle":
            return {"kind": "circle", "radius": self.radius}
        return {"kind": "polygon", "vertices": [list(v) for v in self.vertices]}

    @staticmethod
    def from_json(d):
        if d["kind"] == "box":
            return ShapeSpec("box", size=tuple(d["size"]))
        if d["kind"] == "circle":
            return ShapeSpec("circle", radius=d["radius"])
        return ShapeSpec("polygon", vertices=tuple(tuple(v) for v in d["vertices"]))


@dataclass(eq=False)
class SceneObject:
    id: int
    shape: ShapeSpec
    pose: tuple  # (x, y, yaw)
    height: float  # top surface above the table, m
    color: tuple  # RGB in [0, 1]

    @cached_property
    def footprint(self):
        """World-frame CCW convex polygon."""
        x, y, yaw = self.pose
        return geo.transform(self.shape.local_polygon(), x, y, yaw)

    @cached_property
    def radius(self):
        return geo.polygon_radius(self.footprint)

    @property
    def centroid(self):
        return geo.polygon_centroid(self.footprint)

    def moved_to(self, x, y, yaw=None):
        yaw = self.pose[2] if yaw is None else yaw
        return replace(self, pose=(float(x), float(y), float(yaw)))

    def translated(self, delta):
        x, y, yaw = self.pose
        return self.moved_to(x + delta[0], y + delta[1], yaw)


@dataclass(eq=False)
class Scene:
    objects: list
    workspace: tuple = (0.0, 0.0, 0.64, 0.64)  # (x0, y0, x1, y1) m
    table_depth: float = 0.60  # camera-to-table distance, m
    rng_seed: int = 0
    table_color: tuple = (0.42, 0.40, 0.38)

    def with_objects(self, objects):
        return replace(self, objects=list(objects))

    def to_json(self):
        return {
            "workspace": list(self.workspace),
            "table_depth": self.table_depth,
            "rng_seed": self.rng_seed,
            "objects": [
                {
                    "id": o.id,
                    "shape": o.shape.to_json(),
                    "pose": list(o.pose),
                    "height": o.height,
                    "color": list(o.color),
                }
                for o in self.objects
            ],
        }

    @staticmethod
    def from_json(d):
        objects = [
            SceneObject(
                id=od["id"],
                shape=ShapeSpec.from_json(od["shape"]),
                pose=tuple(od["pose"]),
                height=od["height"],
                color=tuple(od["color"]),
            )
            for od in d["objects"]
        ]
        return Scene(
            objects=objects,
            workspace=tuple(d["workspace"]),
            table_depth=d["table_depth"],
            rng_seed=d.get("rng_seed", 0),
        )


def save_scene(scene, path):
    with open(path, "w") as f:
        json.dump(scene.to_json(), f, indent=2)


def load_scene(path):
    with open(path) as f:
        return Scene.from_json(json.load(f))


@dataclass(frozen=True)
class CameraModel:
    """Orthographic overhead camera: affine map between meters and pixels."""

    resolution: tuple = (256, 256)  # (W, H)
    scale: float = 400.0  # px per meter
    origin: tuple = (0.0, 0.0)  # world point of the image corner, m

    def world_to_px(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return (pts - np.asarray(self.origin)) * self.scale - 0.5

    def px_to_world(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return (pts + 0.5) / self.scale + np.asarray(self.origin)

    def pixel_centers(self):
        w, h = self.resolution
        xs = self.origin[0] + (np.arange(w) + 0.5) / self.scale
        ys = self.origin[1] + (np.arange(h) + 0.5) / self.scale
        return xs, ys

    def covers(self, workspace):
        x0, y0, x1, y1 = workspace
        w, h = self.resolution
        return (
            self.origin[0] <= x0
            and self.origin[1] <= y0
            and self.origin[0] + w / self.scale >= x1
            and self.origin[1] + h / self.scale >= y1
        )


def default_camera(scene=None):
    return CameraModel()


@dataclass(frozen=True)
class GripperParams:
    opening: float = 0.10  # jaw opening, m
    finger_span: float = 0.02  # closed-gripper sweep width, m
    finger_section: tuple = (0.02, 0.01)  # finger footprint (across, along axis), m
    insert_depth: float = 0.02  # how far fingers descend below the object top, m
    grip_margin: float = 0.005  # clearance needed on each jaw, m


@dataclass(frozen=True)
class GraspOutcome:
    success: bool
    multi_pick: bool
    picked_ids: tuple
    failure_reason: str  # collision | too_wide | empty_jaws | none


@dataclass(frozen=True)
class PushSweep:
    """Linear closed-gripper sweep in workspace meters."""

    start: tuple
    end: tuple


@dataclass(frozen=True)
class PushEvents:
    moved_ids: tuple
    clamped_ids: tuple
    iterations: int


# -- catalog ------------------------------------------------------------

_TRIANGLE = tuple(
    map(tuple, (geo.regular_polygon(0.032, 3) @ np.eye(2)).round(6).tolist())
)
_PENTAGON = tuple(
    map(tuple, (geo.regular_polygon(0.027, 5) @ np.eye(2)).round(6).tolist())
)


def default_catalog():
    """8 shape templates standing in for daily-use goods: (shape, height, color)."""
    return [
        (ShapeSpec("box", size=(0.03, 0.05)), 0.040, (0.85, 0.20, 0.15)),
        (ShapeSpec("box", size=(0.04, 0.04)), 0.032, (0.15, 0.55, 0.85)),
        (ShapeSpec("box", size=(0.04, 0.06)), 0.048, (0.20, 0.75, 0.25)),
        (ShapeSpec("box", size=(0.05, 0.08)), 0.036, (0.95, 0.80, 0.15)),
        (ShapeSpec("circle", radius=0.015), 0.044, (0.70, 0.25, 0.75)),
        (ShapeSpec("circle", radius=0.020), 0.034, (0.95, 0.50, 0.10)),
        (ShapeSpec("polygon", vertices=_TRIANGLE), 0.042, (0.20, 0.75, 0.70)),
        (ShapeSpec("polygon", vertices=_PENTAGON), 0.050, (0.55, 0.35, 0.20)),
    ]


# -- heap construction --------------------------------------------------


def _inside_workspace(footprint, workspace, margin=0.0):
    x0, y0, x1, y1 = workspace
    return (
        footprint[:, 0].min() >= x0 + margin
        and footprint[:, 1].min() >= y0 + margin
        and footprint[:, 0].max() <= x1 - margin
        and footprint[:, 1].max() <= y1 - margin
    )


def spawn_heap(
    seed,
    n,
    catalog=None,
    workspace=(0.0, 0.0, 0.64, 0.64),
    table_depth=0.60,
    max_rejections=10000,
    spread=None,
):
    """Sample a contiguous non-overlapping heap of n objects around the center.

    Deterministic in (seed, n, catalog). Each object lands within 1.5x its
    diameter of an earlier object; raises PlacementFailure after exhausting
    the rejection budget. By default each object either lands in contact
    with its anchor or scatters a short distance away, and the contact
    fraction grows with n: bigger dumps pile up, small ones sprawl. Passing
    an explicit ``spread`` range disables the mixture and draws every
    spacing factor uniformly from that range.
    """
    if not 1 <= n <= 20:
        raise ValueError("n must be in 1..20")
    contact_frac = min(0.95, 0.15 + 0.04 * n) if spread is None else None
    catalog = catalog if catalog is not None else default_catalog()
    if not catalog:
        raise ValueError("catalog must be non-empty")
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = workspace
    center = np.array([(x0 + x1) / 2, (y0 + y1) / 2])
    placed = []
    rejections = 0
    while len(placed) < n:
        tpl_shape, tpl_h, tpl_color = catalog[int(rng.integers(len(catalog)))]
        yaw = float(rng.uniform(0.0, 2.0 * np.pi))
        if not placed:
            pos = center + rng.normal(0.0, 0.02, size=2)
            d = np.linalg.norm(pos - center)
            if d > 0.08:
                pos = center + (pos - center) * (0.08 / d)
        else:
            anchor = placed[int(rng.integers(len(placed)))]
            ang = float(rng.uniform(0.0, 2.0 * np.pi))
            cand = SceneObject(0, tpl_shape, (0.0, 0.0, yaw), tpl_h, tpl_color)
            if contact_frac is not None:
                lo, hi = (
                    (1.02, 1.08)
                    if rng.random() < contact_frac
                    else (1.20, 1.35)
                )
            else:
                lo, hi = spread
            dist = (anchor.radius + cand.radius) * float(rng.uniform(lo, hi))
            pos = np.asarray(anchor.centroid) + dist * np.array(
                [np.cos(ang), np.sin(ang)]
            )
        obj = SceneObject(
            id=len(placed),
            shape=tpl_shape,
            pose=(float(pos[0]), float(pos[1]), yaw),
            height=tpl_h,
            color=tpl_color,
        )
        ok = _inside_workspace(obj.footprint, workspace)
        if ok:
            for other in placed:
                if geo.penetration_depth(obj.footprint, other.footprint) > 0.0:
                    ok = False
                    break
        if ok and placed:
            diam = 2.0 * obj.radius
            near = min(
                np.linalg.norm(np.asarray(obj.centroid) - np.asarray(o.centroid))
                for o in placed
            )
            ok = near <= 1.5 * diam
        if ok:
            placed.append(obj)
        else:
            rejections += 1
            if rejections >= max_rejections:
                raise PlacementFailure(
                    f"placed {len(placed)}/{n} after {max_rejections} rejections"
                )
    return Scene(
        objects=placed, workspace=workspace, table_depth=table_depth, rng_seed=seed
    )


# -- rendering -----------------------------------------------------------


def render(scene, cam=None):
    """Render (rgb, depth). Topmost object wins both color and depth."""
    cam = cam or default_camera(scene)
    if not cam.covers(scene.workspace):
        raise ValueError("camera does not cover the workspace")
    w, h = cam.resolution
    depth = np.full((h, w), scene.table_depth, dtype=np.float64)
    rgb = np.empty((h, w, 3), dtype=np.float64)
    rgb[:] = scene.table_color
    xs, ys = cam.pixel_centers()
    for obj in sorted(scene.objects, key=lambda o: (o.height, o.id)):
        fp = obj.footprint
        px = cam.world_to_px(fp)
        j0 = max(0, int(np.floor(px[:, 0].min())))
        j1 = min(w, int(np.ceil(px[:, 0].max())) + 1)
        i0 = max(0, int(np.floor(px[:, 1].min())))
        i1 = min(h, int(np.ceil(px[:, 1].max())) + 1)
        if j0 >= j1 or i0 >= i1:
            continue
        cov = kernels.convex_coverage(xs[j0:j1], ys[i0:i1], fp).astype(bool)
        depth[i0:i1, j0:j1][cov] = scene.table_depth - obj.height
        rgb[i0:i1, j0:j1][cov] = obj.color
    return rgb, depth


def render_background(scene, cam=None):
    """Depth image of the empty table (the a-priori known background)."""
    cam = cam or default_camera(scene)
    w, h = cam.resolution
    return np.full((h, w), scene.table_depth, dtype=np.float64)


# -- push ----------------------------------------------------------------


def _point_segment_dist(p, a, b):
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def _clamp_all(objects, workspace, clamped):
    for idx, obj in enumerate(objects):
        obj2, was_clamped = _clamp_into_workspace(obj, workspace)
        if was_clamped:
            objects[idx] = obj2
            clamped.add(obj.id)


def _clamp_into_workspace(obj, workspace):
    fp = obj.footprint
    x0, y0, x1, y1 = workspace
    dx = max(0.0, x0 - fp[:, 0].min()) - max(0.0, fp[:, 0].max() - x1)
    dy = max(0.0, y0 - fp[:, 1].min()) - max(0.0, fp[:, 1].max() - y1)
    if dx == 0.0 and dy == 0.0:
        return obj, False
    return obj.translated((dx, dy)), True


def _max_advance(obj, dhat, workspace):
    """Largest translation along dhat keeping the footprint inside."""
    fp = obj.footprint
    x0, y0, x1, y1 = workspace
    t = np.inf
    if dhat[0] > 1e-12:
        t = min(t, (x1 - fp[:, 0].max()) / dhat[0])
    elif dhat[0] < -1e-12:
        t = min(t, (x0 - fp[:, 0].min()) / dhat[0])
    if dhat[1] > 1e-12:
        t = min(t, (y1 - fp[:, 1].max()) / dhat[1])
    elif dhat[1] < -1e-12:
        t = min(t, (y0 - fp[:, 1].min()) / dhat[1])
    return float(t)


def _fits(obj, workspace):
    fp = obj.footprint
    x0, y0, x1, y1 = workspace
    return (
        fp[:, 0].min() >= x0 - 1e-12
        and fp[:, 0].max() <= x1 + 1e-12
        and fp[:, 1].min() >= y0 - 1e-12
        and fp[:, 1].max() <= y1 + 1e-12
    )


def _separate_overlaps(objects, workspace, moved, clamped):
    """Resolve pairwise footprint penetrations in place; returns iterations."""
    for iterations in range(1, 101):
        overlaps = []
        cents = [np.asarray(o.centroid) for o in objects]
        rads = [o.radius for o in objects]
        for i in range(len(objects)):
            for j in range(i + 1, len(objects)):
                if np.linalg.norm(cents[i] - cents[j]) > rads[i] + rads[j]:
                    continue
                mtv = geo.sat_mtv(objects[i].footprint, objects[j].footprint)
                if mtv is not None and mtv[0] > PENETRATION_TOL:
                    overlaps.append((i, j, mtv))
        if not overlaps:
            return iterations
        # minimum-translation relaxation, deepest contacts first; each
        # object takes half the shift unless the boundary pins it, in
        # which case its partner absorbs the rest
        overlaps.sort(key=lambda o: -o[2][0])
        for i, j, _ in overlaps:
            a, b = objects[i], objects[j]
            # re-test: earlier resolutions in this pass may have fixed it
            mtv = geo.sat_mtv(a.footprint, b.footprint)
            if mtv is None or mtv[0] <= PENETRATION_TOL:
                continue
            depth, axis = mtv
            half = (0.5 * depth + 1e-5) * axis
            ca = a.translated(-half)
            cb = b.translated(half)
            a_ok = _fits(ca, workspace)
            b_ok = _fits(cb, workspace)
            if a_ok and b_ok:
                objects[i], objects[j] = ca, cb
                moved.add(a.id)
                moved.add(b.id)
            elif b_ok:
                full = b.translated((depth + 1e-5) * axis)
                objects[j] = full if _fits(full, workspace) else cb
                moved.add(b.id)
            elif a_ok:
                full = a.translated(-(depth + 1e-5) * axis)
                objects[i] = full if _fits(full, workspace) else ca
                moved.add(a.id)
            else:
                objects[i], objects[j] = ca, cb
                moved.add(a.id)
                moved.add(b.id)
        _clamp_all(objects, workspace, clamped)
    raise NonConvergence("separation exceeded 100 iterations")


def apply_push(scene, sweep, gripper=None):
    """Execute a closed-gripper linear sweep; quasi-static displacement.

    Objects hit by the sweep corridor translate along the push direction
    until their trailing edge clears the gripper front; cascaded contacts
    are resolved by iterative pairwise separation. Objects that would exit
    the workspace are clamped to the boundary and reported in PushEvents.
    """
    gripper = gripper or GripperParams()
    start = np.asarray(sweep.start, dtype=float)
    end = np.asarray(sweep.end, dtype=float)
    x0, y0, x1, y1 = scene.workspace
    for p in (start, end):
        if not (x0 <= p[0] <= x1 and y0 <= p[1] <= y1):
            raise ValueError("push endpoints must lie inside the workspace")
    delta = end - start
    length = float(np.linalg.norm(delta))
    if length < 1e-9:
        return scene, PushEvents((), (), 0)
    dhat = delta / length
    corridor = geo.rectangle((start + end) / 2, dhat, length, gripper.finger_span)
    proj_end = float(np.dot(end, dhat))

    objects = list(scene.objects)
    moved = set()
    clamped = set()
    half_span = 0.5 * gripper.finger_span
    hits = []
    for i, obj in enumerate(objects):
        # bounding-circle prefilter against the sweep segment
        if _point_segment_dist(obj.centroid, start, end) > obj.radius + half_span:
            continue
        if geo.penetration_depth(corridor, obj.footprint) <= 0.0:
            continue
        hits.append(i)
    # objects stack in front of the gripper: the rearmost one rides the
    # gripper face and clears the sweep end, each object further along
    # queues up in front of it with a dispersal gap (abutting drop-offs
    # would just relocate the clutter); the queue jams against the
    # workspace boundary rather than crossing it
    queue_gap = 0.04
    hits.sort(key=lambda i: float(np.max(objects[i].footprint @ dhat)))
    front = proj_end
    for i in hits:
        obj = objects[i]
        trail = float(np.min(obj.footprint @ dhat))
        t = front - trail
        if t > 0.0:
            allowed = _max_advance(obj, dhat, scene.workspace)
            if allowed < t:
                t = max(allowed, 0.0)
                clamped.add(obj.id)
            if t > 0.0:
                objects[i] = obj.translated(t * dhat)
                moved.add(obj.id)
        front = max(front, float(np.max(objects[i].footprint @ dhat))) + queue_gap
    _clamp_all(objects, scene.workspace, clamped)

    iterations = _separate_overlaps(objects, scene.workspace, moved, clamped)

    return scene.with_objects(objects), PushEvents(
        tuple(sorted(moved)), tuple(sorted(clamped)), iterations
    )


# -- grasp ---------------------------------------------------------------


def _disturbed(scene, bumped):
    """Scene after a failed grasp whose fingers or jaws shifted objects."""
    if not bumped:
        return scene
    objects = [bumped.get(o.id, o) for o in scene.objects]
    moved, clamped = set(bumped), set()
    _clamp_all(objects, scene.workspace, clamped)
    _separate_overlaps(objects, scene.workspace, moved, clamped)
    return scene.with_objects(objects)


def attempt_grasp(scene, pose, gripper=None, cam=None):
    """Two-finger grasp at an image-plane pose; geometric success model.

    A failed attempt is not free: fingers that land on an object shove it
    aside, and jaws that jam while closing drag the jammed objects toward
    the grasp axis. Only attempts that touch nothing leave the scene
    unchanged.
    """
    gripper = gripper or GripperParams()
    cam = cam or default_camera(scene)
    center = cam.px_to_world(np.asarray(pose.center, dtype=float))[0]
    x0, y0, x1, y1 = scene.workspace
    if not (x0 <= center[0] <= x1 and y0 <= center[1] <= y1):
        raise ValueError("grasp center must lie inside the workspace")
    dhat = np.array([np.cos(pose.angle), np.sin(pose.angle)])
    opening = pose.opening_px / cam.scale
    # fingers descend just inside the opening ends; the graspable gap is
    # the band between their inner faces
    across, along = gripper.finger_section
    gap = 0.5 * opening - along
    jaw_region = geo.rectangle(center, dhat, 2.0 * gap, across)

    in_jaws = [
        o
        for o in scene.objects
        if geo.penetration_depth(jaw_region, o.footprint) > 0.0
    ]
    if not in_jaws:
        return scene, GraspOutcome(False, False, (), "empty_jaws")
    z_ins = max(o.height for o in in_jaws) - gripper.insert_depth

    fingers = [
        geo.rectangle(center - (gap + 0.5 * along) * dhat, dhat, along, across),
        geo.rectangle(center + (gap + 0.5 * along) * dhat, dhat, along, across),
    ]
    bumped = {}
    for o in scene.objects:
        if o.height <= z_ins:
            continue
        for finger in fingers:
            mtv = geo.sat_mtv(finger, o.footprint)
            if mtv is not None and mtv[0] > 0.0:
                # the descending finger shoves the object out of its volume
                depth, axis = mtv
                bumped[o.id] = o.translated((depth + 1e-5) * axis)
    if bumped:
        return _disturbed(scene, bumped), GraspOutcome(False, False, (), "collision")

    # the fingers close at z_ins: anything shorter stays on the table
    gripped = [o for o in in_jaws if o.height > z_ins]
    projs = [(o.footprint @ dhat) for o in gripped]
    extent = max(p.max() for p in projs) - min(p.min() for p in projs)
    if extent > 2.0 * gap - 2.0 * gripper.grip_margin:
        # the jaws jam while closing: each jammed object is dragged a
        # little toward the grasp axis and twisted by the jam torque
        # before the gripper backs off
        squeeze = gripper.grip_margin
        for o in gripped:
            s = float((np.asarray(o.centroid) - center) @ dhat)
            shift = -np.sign(s) * min(abs(s), squeeze)
            x, y, yaw = o.pose
            twist = np.sign(s) * JAM_TWIST if s != 0.0 else JAM_TWIST
            bumped[o.id] = o.moved_to(
                x + shift * dhat[0], y + shift * dhat[1], yaw + twist
            )
        return _disturbed(scene, bumped), GraspOutcome(False, False, (), "too_wide")

    picked = tuple(sorted(o.id for o in gripped))
    remaining = [o for o in scene.objects if o.id not in picked]
    return scene.with_objects(remaining), GraspOutcome(
        True, len(picked) >= 2, picked, "none"
    )


# -- image files ---------------------------------------------------------


def write_pgm16(values, path, scale=10000.0):
    """16-bit binary PGM, values multiplied by `scale` and clipped to uint16."""
    v = np.rint(np.asarray(values, dtype=np.float64) * scale)
    v = np.clip(v, 0, 65535).astype(">u2")
    h, w = v.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n65535\n".encode())
        f.write(v.tobytes())


def read_pgm16(path, scale=10000.0):
    with open(path, "rb") as f:
        data = f.read()
    header, rest = data.split(b"\n", 1)
    assert header == b"P5"
    dims, rest = rest.split(b"\n", 1)
    w, h = map(int, dims.split())
    _maxval, raw = rest.split(b"\n", 1)
    v = np.frombuffer(raw[: w * h * 2], dtype=">u2").reshape(h, w)
    return v.astype(np.float64) / scale


def write_ppm(rgb, path):
    """8-bit binary PPM from float RGB in [0, 1]."""
    v = np.clip(np.rint(np.asarray(rgb) * 255.0), 0, 255).astype(np.uint8)
    h, w, _ = v.shape
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode())
        f.write(v.tobytes())


def read_ppm(path):
    with open(path, "rb") as f:
        data = f.read()
    header, rest = data.split(b"\n", 1)
    assert header == b"P6"
    dims, rest = rest.split(b"\n", 1)
    w, h = map(int, dims.split())
    _maxval, raw = rest.split(b"\n", 1)
    v = np.frombuffer(raw[: w * h * 3], dtype=np.uint8).reshape(h, w, 3)
    return v.astype(np.float64) / 255.0
