"""Build the optional compiled kernels.

The extension is skipped (and the numpy fallback used) when Cython or a C
compiler is unavailable, or when DUALCAVITY_NO_EXT=1 is set.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DUALCAVITY_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "dualcavity._kernels_c",
                    ["src/dualcavity/_kernels_c.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
