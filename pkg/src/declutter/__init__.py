"""Disperse-and-pick: clutter-aware push/grasp planning on a deterministic
2D tabletop simulator."""

from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
