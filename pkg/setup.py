"""Build script for the optional compiled stepping kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a missing Cython or C compiler only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "commonbath._stepping",
                ["src/commonbath/_stepping.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
