"""Build the optional Cython kernels; the package falls back to numpy if they are absent."""
import os
import sys

from setuptools import setup

ext_modules = []
if not os.environ.get("LOCALSPEC_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "localspec.kernels._ckernels",
                    ["src/localspec/kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": 3},
        )
    except ImportError as exc:
        print(f"localspec: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
