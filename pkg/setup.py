import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernels are an optimization: if no C compiler is available the
# build still succeeds and the package falls back to the pure-Python kernels.
extensions = [
    Extension(
        "polarfec._kernels._ckernels",
        ["src/polarfec/_kernels/_ckernels.pyx"],
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
