"""Build script: compiles the optional pair-scan extension when a toolchain
is available, otherwise installs with the pure-numpy kernel only."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("MTPIPE_SKIP_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "mtpipe._kernels._pairscan",
                    ["src/mtpipe/_kernels/_pairscan.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
