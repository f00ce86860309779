import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernel is optional: without Cython or a compiler the package
# installs with the numpy fallback only.
try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("CEDAGOF_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "cedagof._ckernels",
                ["src/cedagof/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
