"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set DECLUTTER_PURE_PYTHON=1 to force the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("DECLUTTER_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def edt_sq(obstacles):
    import numpy as np

    obstacles = np.ascontiguousarray(obstacles, dtype=np.uint8)
    if not obstacles.any():
        raise ValueError("edt_sq requires at least one obstacle pixel")
    return _impl.edt_sq(obstacles)


def convex_coverage(xs, ys, verts):
    import numpy as np

    return _impl.convex_coverage(
        np.ascontiguousarray(xs, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.float64),
        np.ascontiguousarray(verts, dtype=np.float64),
    )
