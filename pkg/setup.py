"""Build script: compiles the optional simplex speedup extension.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so a failed compile is not fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "credalkit._simplex_ext",
                ["src/credalkit/_simplex_ext.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
