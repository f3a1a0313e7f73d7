"""Optional build of the compiled power-iteration kernel.

The package is pure Python by default; the Cython extension only speeds up
the transfer-operator inner loop.  Build in place with

    python setup.py build_ext --inplace

If Cython or a C compiler is missing the build silently degrades to the
numpy fallback in cuspwind.kernels.
"""

import os

from setuptools import setup

ext_modules = []
pyx = os.path.join(os.path.dirname(__file__), "src", "cuspwind", "_ckernels.pyx")
if os.path.exists(pyx):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            "src/cuspwind/_ckernels.pyx",
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
