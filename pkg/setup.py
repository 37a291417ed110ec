"""Build script: compiles the optional fast kernels when Cython is available.

The package is fully functional without the extension; `nondegen._kernels`
falls back to a numpy implementation selected at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/nondegen/_kernels/_native.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
