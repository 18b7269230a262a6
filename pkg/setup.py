import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator extension when a toolchain is present, skip it otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: accelerator extension skipped: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: accelerator extension {ext.name} not built: {exc}", file=sys.stderr)


def extensions():
    if os.environ.get("ISRUPLAN_PURE_PYTHON"):
        return []
    if not os.path.exists("src/isruplan/_kernels.pyx"):
        return []
    try:
        from Cython.Build import cythonize
        import numpy
    except ImportError:
        return []
    # -ffp-contract=off keeps the compiled kernels bit-identical to the
    # numpy reference by forbidding fused multiply-add contraction
    fp_flags = ["-ffp-contract=off"] if sys.platform != "win32" else []
    ext = Extension(
        "isruplan._kernels",
        ["src/isruplan/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=fp_flags,
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
