"""Build script for the optional compiled kernels.

The package works without them (``primesums._fallback`` is used), so a
failed compile only costs speed.
"""

import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("PRIMESUMS_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "primesums._kernels",
                    ["src/primesums/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives=dict(
                language_level="3",
                boundscheck=False,
                wraparound=False,
                cdivision=True,
            ),
        )

setup(ext_modules=ext_modules)
