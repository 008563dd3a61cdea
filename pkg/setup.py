"""Builds the optional compiled kernels; metadata lives in pyproject.toml."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("HUBBARD_UCC_PURE_PYTHON") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            "src/hubbard_ucc/_ckernels.pyx",
            compiler_directives={"language_level": 3},
        )
        for ext in ext_modules:
            ext.include_dirs.append(numpy.get_include())

setup(ext_modules=ext_modules)
