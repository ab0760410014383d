"""Build script: compiles the optional Cython kernel extension.

The extension is a pure speedup; if compilation fails (no compiler, no
Cython) the package installs anyway and falls back to the numpy kernels
at import time.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "warbench._kernels._corekernels",
        sources=["src/warbench/_kernels/_corekernels.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off keeps results bit-identical to the numpy
        # fallback (no FMA contraction inside the recursions).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Never let a failed extension build abort the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warbench: skipping compiled kernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warbench: skipping {ext.name} ({exc})", file=sys.stderr)


setup(ext_modules=make_extensions(), cmdclass={"build_ext": optional_build_ext})
