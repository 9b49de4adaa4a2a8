"""Build hook for the optional compiled min-cost-flow kernel.

The extension is a pure speedup: if Cython or a C compiler is missing the
install still succeeds and ptzflow.solver falls back to the pure-Python
kernel at import time.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compilation failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"compiled kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel {ext.name} skipped: {exc}")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; using the pure-Python kernel")
        return []
    ext = Extension(
        "ptzflow._mincost",
        ["src/ptzflow/_mincost.pyx"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
