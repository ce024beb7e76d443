"""Build script for the optional compiled kernels.

The package works without them: ``lorentziso.kernels`` falls back to the
pure-numpy implementations in ``_kernels_py`` when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("LORENTZISO_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "lorentziso._kernels",
                    ["src/lorentziso/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
