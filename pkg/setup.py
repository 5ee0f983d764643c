import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

PYX = os.path.join("src", "lienard", "_kernel", "_core.pyx")

ext_modules = []
if cythonize is not None and os.path.exists(PYX):
    ext_modules = cythonize(
        [
            Extension(
                "lienard._kernel._core",
                [PYX],
                include_dirs=[numpy.get_include()],
                # Contraction off: the compiled kernel must execute the same
                # IEEE operation sequence as the pure-Python fallback.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
