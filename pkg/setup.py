import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "declutter._kernels",
                ["src/declutter/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython: install pure, the package falls back to numpy kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
