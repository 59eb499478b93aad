"""Build script for the optional compiled kernels.

The package works without the extension (a plain numpy fallback is selected at
import time), so a missing compiler or Cython only costs speed, not features.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("irswet._accel", ["src/irswet/_accel.pyx"])],
        language_level="3",
    )

setup(ext_modules=ext_modules)
