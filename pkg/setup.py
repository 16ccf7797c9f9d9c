"""Build script for the optional compiled kernels.

The package works without the extension (troprank.kernels falls back to the
pure-Python implementation), but the compiled module is what makes the
submatrix sweeps comfortable at the larger test sizes.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "troprank._kernels",
        ["src/troprank/_kernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level="3"))
