"""Build script: compiles the optional Cython kernel.

Set GIRTHFORGE_PURE=1 to skip the extension entirely; the package then
falls back to the pure-Python kernel at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("GIRTHFORGE_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "girthforge._cykernel",
                    ["src/girthforge/_cykernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython available: ship pure Python only.
        ext_modules = []

setup(ext_modules=ext_modules)
