from setuptools import setup, Extension

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "meanchi._eulerkern",
                ["src/meanchi/_eulerkern.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    # pure-Python install; meanchi.topology falls back to the numpy backend
    ext_modules = []

setup(ext_modules=ext_modules)
