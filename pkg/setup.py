"""Build script: compiles the optional Cython kernel.

The package is pure Python; tfm._speedups only accelerates the hot loops
(weight scans and integer matrix ranks).  If Cython or a C compiler is
missing the build still succeeds and tfm falls back to tfm._pykernel.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tfm._speedups",
                ["src/tfm/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
