"""Build the optional Cython enumeration kernel.

The package works without it: ``ssx._kernel`` falls back to the pure-Python
implementation when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SSX_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "ssx._enum_ext",
                    ["src/ssx/_enum_ext.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
