import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/coxtoda/_kern/_fast.pyx"], language_level=3
    )
except Exception as exc:  # pragma: no cover - build environments without Cython
    sys.stderr.write(f"coxtoda: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
