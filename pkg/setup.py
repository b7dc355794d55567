from setuptools import Extension, setup

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    # Source-only install: the package falls back to the NumPy kernels.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "singescape._fastkin",
                ["src/singescape/_fastkin.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
