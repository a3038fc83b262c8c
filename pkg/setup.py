"""Build script: compiles the optional consensus kernel extension.

The compiled kernel is a pure speed-up; if Cython or a C compiler is
unavailable the package installs anyway and falls back to the Python
kernel at import time. Set ICFPIE_PURE_PYTHON=1 to skip the extension
build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to a pure-Python install on compile failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"icfpie: skipping compiled kernel ({exc}); "
                  "falling back to the Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"icfpie: failed to build {ext.name} ({exc}); "
                  "falling back to the Python kernel")


def extensions():
    if os.environ.get("ICFPIE_PURE_PYTHON") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "icfpie._kernels._consensus_cy",
                ["src/icfpie/_kernels/_consensus_cy.pyx"],
                # -ffp-contract=off: no FMA contraction, so the compiled
                # kernel stays bit-identical to the Python fallback
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
