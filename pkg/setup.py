"""Build the optional compiled kernels.

Without Cython or a C compiler the package still installs; the pure-Python
kernels are selected at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "symtorsion._kernels._ckernels",
                ["src/symtorsion/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
