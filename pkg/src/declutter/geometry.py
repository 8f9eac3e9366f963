"""Convex polygon primitives used by the 2D workspace simulator.

All polygons are (n, 2) float arrays of counter-clockwise vertices in
workspace meters. Circles are polygonized at construction, so every
footprint operation reduces to convex polygon geometry.
"""

import numpy as np


def transform(verts, x, y, yaw):
    """Rotate local vertices by yaw and translate to (x, y)."""
    c, s = np.cos(yaw), np.sin(yaw)
    rot = np.array([[c, -s], [s, c]])
    return np.asarray(verts) @ rot.T + np.array([x, y])


def _next(v):
    """v rotated one step forward (v[i+1] with wraparound)."""
    out = np.empty_like(v)
    out[:-1] = v[1:]
    out[-1] = v[0]
    return out


def polygon_area(verts):
    x = verts[:, 0]
    y = verts[:, 1]
    return 0.5 * np.sum(x * _next(y) - _next(x) * y)


def polygon_centroid(verts):
    x = verts[:, 0]
    y = verts[:, 1]
    xn = _next(x)
    yn = _next(y)
    cross = x * yn - xn * y
    a = 0.5 * cross.sum()
    cx = np.sum((x + xn) * cross) / (6.0 * a)
    cy = np.sum((y + yn) * cross) / (6.0 * a)
    return np.array([cx, cy])


def polygon_radius(verts):
    """Max distance from centroid to a vertex (circumradius of footprint)."""
    c = polygon_centroid(verts)
    return float(np.max(np.linalg.norm(verts - c, axis=1)))


def regular_polygon(radius, n=24):
    ang = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])


def edge_normals(verts):
    edges = np.empty_like(verts)
    edges[:-1] = verts[1:]
    edges[-1] = verts[0]
    edges -= verts
    normals = np.column_stack([edges[:, 1], -edges[:, 0]])
    lens = np.sqrt(normals[:, 0] ** 2 + normals[:, 1] ** 2)
    return normals / lens[:, None]


def project(verts, axis):
    p = verts @ axis
    return p.min(), p.max()


def sat_mtv(a, b):
    """Minimum translation vector between convex polygons via SAT.

    Returns (depth, axis) with axis the unit direction to move `b` so the
    pair separates, or None if they do not overlap.
    """
    axes = np.vstack([edge_normals(a), edge_normals(b)])
    pa = a @ axes.T
    pb = b @ axes.T
    amin, amax = pa.min(axis=0), pa.max(axis=0)
    bmin, bmax = pb.min(axis=0), pb.max(axis=0)
    if (np.minimum(amax, bmax) < np.maximum(amin, bmin)).any():
        return None
    # translation needed along +axis / -axis; when one projection contains
    # the other this exceeds the plain interval overlap
    t_up = amax - bmin
    t_dn = bmax - amin
    t = np.minimum(t_up, t_dn)
    i = int(np.argmin(t))
    best_axis = axes[i].copy() if t_up[i] <= t_dn[i] else -axes[i]
    return float(t[i]), best_axis


def penetration_depth(a, b):
    """SAT penetration depth in meters, 0.0 when separated."""
    mtv = sat_mtv(a, b)
    return 0.0 if mtv is None else mtv[0]


def separation_along(a, b, direction):
    """Min t >= 0 so translating `b` by t*direction separates the pair.

    Separation only requires one axis to open up, hence the min over axes
    whose projection gap closes in `direction`. Returns inf when moving
    along `direction` can never separate them.
    """
    best = np.inf
    for axis in np.vstack([edge_normals(a), edge_normals(b)]):
        amin, amax = project(a, axis)
        bmin, bmax = project(b, axis)
        if min(amax, bmax) - max(amin, bmin) < 0.0:
            return 0.0
        d = float(np.dot(direction, axis))
        if d > 1e-12:
            t = (amax - bmin) / d
        elif d < -1e-12:
            t = (bmax - amin) / (-d)
        else:
            continue
        if 0.0 <= t < best:
            best = t
    return best


def point_in_convex(points, verts, tol=0.0):
    """Vectorized inclusion test for CCW convex polygon (boundary inclusive)."""
    points = np.atleast_2d(points)
    edges = np.empty_like(verts)
    edges[:-1] = verts[1:]
    edges[-1] = verts[0]
    edges -= verts
    rel_x = points[:, 0][:, None] - verts[:, 0][None, :]
    rel_y = points[:, 1][:, None] - verts[:, 1][None, :]
    cross = edges[:, 0] * rel_y - edges[:, 1] * rel_x
    return (cross >= -tol).all(axis=1)


def segment_intersects_polygon(p0, p1, verts):
    """True if segment [p0, p1] touches a convex polygon (SAT on segment+poly)."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    seg = np.vstack([p0, p1])
    d = p1 - p0
    n = np.linalg.norm(d)
    axes = list(edge_normals(verts))
    if n > 1e-12:
        axes.append(np.array([d[1], -d[0]]) / n)
        axes.append(d / n)
    for axis in axes:
        amin, amax = project(seg, axis)
        bmin, bmax = project(verts, axis)
        if min(amax, bmax) - max(amin, bmin) < 0.0:
            return False
    return True


def rectangle(center, axis_dir, length, width):
    """CCW rectangle with `length` along unit vector axis_dir and `width` across."""
    center = np.asarray(center, dtype=float)
    u = np.asarray(axis_dir, dtype=float)
    v = np.array([-u[1], u[0]])
    hl, hw = 0.5 * length, 0.5 * width
    return np.array(
        [
            center - hl * u - hw * v,
            center + hl * u - hw * v,
            center + hl * u + hw * v,
            center - hl * u + hw * v,
        ]
    )
