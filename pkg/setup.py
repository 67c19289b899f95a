"""Build script: compiles the optional accelerator extension.

The package is pure Python plus one Cython module with the two hot
kernels (automaton reachability, box enumeration).  If Cython or a C++
toolchain is missing the build falls back to the pure-Python kernels,
selected automatically at import time.
"""

import sys
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing entirely
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        warnings.warn(
            "ilpath: building the compiled kernels failed (%s); "
            "falling back to the pure-Python implementations" % (exc,)
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("ilpath: Cython not available, skipping compiled kernels")
        return []
    ext = Extension(
        "ilpath._speedups",
        ["src/ilpath/_speedups.pyx"],
        language="c++",
        extra_compile_args=["-O2"] if sys.platform != "win32" else ["/O2"],
    )
    return cythonize([ext], language_level="3")


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
