"""Build script for the optional compiled kernel.

The package is fully functional without the extension (a pure-Python
implementation of the same kernel API is selected at import time), so a
failed compile downgrades to a warning instead of aborting the install.
Set LLV_LAB_NO_EXT=1 to skip the extension build entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernel skipped ({exc}); "
                  "falling back to the pure-Python kernels", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python kernels", file=sys.stderr)


ext_modules = []
cmdclass = {}
if not os.environ.get("LLV_LAB_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("llv_lab._kernels._speedups",
                       ["src/llv_lab/_kernels/_speedups.pyx"])],
            language_level=3,
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        print("warning: Cython not available; installing without the "
              "compiled kernels", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass=cmdclass)
