"""Build script.

The package works as pure Python; the optional Cython extension
``gsrepeater._kernels._core`` accelerates the optimizer hot path.  If the
extension cannot be built (no compiler, no Cython) the install proceeds
without it and the package falls back to the Python kernels at import time.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gsrepeater/_kernels/_core.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
