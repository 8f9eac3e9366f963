# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exact squared Euclidean distance transform and
convex-polygon rasterization. Mirrors the numpy fallbacks in _kernels_py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def edt_sq(cnp.uint8_t[:, ::1] obstacles):
    """Exact squared Euclidean distance to the nearest nonzero pixel.

    Two-pass algorithm: per-column 1D scan, then per-row lower envelope
    of parabolas. Returns int64 squared distances.
    """
    cdef Py_ssize_t h = obstacles.shape[0]
    cdef Py_ssize_t w = obstacles.shape[1]
    cdef cnp.int64_t inf = <cnp.int64_t>(h + w + 1) * (h + w + 1)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] g_arr = np.empty((h, w), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] g = g_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out_arr = np.empty((h, w), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t x, y, k, q
    cdef cnp.int64_t d, s, fq, fv

    # pass 1: vertical distances (not squared yet), column by column
    for x in range(w):
        d = inf
        for y in range(h):
            if obstacles[y, x]:
                d = 0
            elif d < inf:
                d = d + 1
            g[y, x] = d
        d = inf
        for y in range(h - 1, -1, -1):
            if obstacles[y, x]:
                d = 0
            elif d < inf:
                d = d + 1
            if d < g[y, x]:
                g[y, x] = d
        for y in range(h):
            if g[y, x] < inf:
                g[y, x] = g[y, x] * g[y, x]
            else:
                g[y, x] = inf

    # pass 2: per-row lower envelope (Felzenszwalb & Huttenlocher)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] v_arr = np.empty(w, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z_arr = np.empty(w + 1, dtype=np.float64)
    cdef cnp.int64_t[::1] v = v_arr
    cdef cnp.float64_t[::1] z = z_arr
    cdef double s_f
    for y in range(h):
        k = 0
        v[0] = 0
        z[0] = -1e300
        z[1] = 1e300
        for q in range(1, w):
            fq = g[y, q]
            while True:
                fv = g[y, v[k]]
                s_f = ((fq + <double>q * q) - (fv + <double>v[k] * v[k])) / (2.0 * (q - v[k]))
                if s_f <= z[k]:
                    k -= 1
                else:
                    break
            k += 1
            v[k] = q
            z[k] = s_f
            z[k + 1] = 1e300
        k = 0
        for q in range(w):
            while z[k + 1] < q:
                k += 1
            d = q - v[k]
            out[y, q] = d * d + g[y, v[k]]
    return out_arr


def convex_coverage(double[::1] xs, double[::1] ys, double[:, ::1] verts):
    """Boolean coverage of pixel centers by a convex CCW polygon.

    xs: pixel-center x coordinates (len w); ys: y coordinates (len h);
    verts: (n, 2) CCW polygon. Returns uint8 (h, w), boundary inclusive.
    """
    cdef Py_ssize_t w = xs.shape[0]
    cdef Py_ssize_t h = ys.shape[0]
    cdef Py_ssize_t n = verts.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, e
    cdef double px, py, ex, ey, cx, cy
    cdef bint inside
    for i in range(h):
        py = ys[i]
        for j in range(w):
            px = xs[j]
            inside = True
            for e in range(n):
                ex = verts[(e + 1) % n, 0] - verts[e, 0]
                ey = verts[(e + 1) % n, 1] - verts[e, 1]
                cx = px - verts[e, 0]
                cy = py - verts[e, 1]
                if ex * cy - ey * cx < 0.0:
                    inside = False
                    break
            if inside:
                out[i, j] = 1
    return out_arr
