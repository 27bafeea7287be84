"""Build script: compiles the Cython gate kernels when Cython and a C compiler
are available, otherwise installs with the pure-numpy fallback only."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "fcqbm._kernels",
                ["src/fcqbm/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
