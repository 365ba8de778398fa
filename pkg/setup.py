"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python fallback is selected
at import time); building with Cython just makes the hot loops fast.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "spin2._ckernels",
                ["src/spin2/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
