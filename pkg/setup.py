"""Build the optional compiled kernels.

The extension is marked optional: if no compiler is available the package
installs anyway and falls back to the pure-Python kernels at import time.
"""
import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "fastoopsi._ckernels",
        ["src/fastoopsi/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
