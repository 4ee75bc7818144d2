"""Build script.

The compiled mode-equation integrator is optional: if Cython (or a C
compiler) is unavailable the package installs pure-Python and selects the
fallback integrator at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "quadwave.kernels._modeode",
                ["src/quadwave/kernels/_modeode.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
