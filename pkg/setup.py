"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python twin is selected at
import time), so a missing compiler only costs speed, not functionality.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RETRO_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "retrokit.kernels._speedups",
                    ["src/retrokit/kernels/_speedups.pyx"],
                    language="c++",
                    extra_compile_args=["-O3", "-std=c++11"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
