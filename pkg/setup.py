"""Build script: compiles the hot-kernel extension when a toolchain is
available and falls back to the pure-Python implementation otherwise."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HERMKIN_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hermkin._core._kernels",
                    ["src/hermkin/_core/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
