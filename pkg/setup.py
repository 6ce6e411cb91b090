import os

import numpy as np
from setuptools import Extension, setup

# COHBOUND_NO_EXT=1 skips the compiled core; the package then runs on the
# pure-Python kernels.
ext_modules = []
if not os.environ.get("COHBOUND_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cohbound._ckernels",
                ["src/cohbound/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                # no fast-math or sincos fusion: the Gaussian stream must match the fallback bit for bit
                extra_compile_args=["-O2", "-ffp-contract=off", "-fno-builtin"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
