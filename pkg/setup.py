from setuptools import Extension, setup

import numpy as np

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hsgrowth.core._native",
                ["src/hsgrowth/core/_native.pyx"],
                include_dirs=[np.get_include()],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # pure-numpy fallback is selected at import when the ext is absent
    ext_modules = []

setup(ext_modules=ext_modules)
