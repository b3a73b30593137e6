"""Build script for the optional compiled edit-distance kernel.

The package works without the extension: sessiontopics.distance falls back
to the pure-Python implementation when the compiled module is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "sessiontopics._speedups",
                sources=["src/sessiontopics/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
