"""Builds the optional Cython varint kernel.

If Cython (or a C compiler) is unavailable the install still succeeds;
pagesearch falls back to the pure-Python codec at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "pagesearch._kernels._varint",
                ["src/pagesearch/_kernels/_varint.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
