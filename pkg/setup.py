"""Build script: compiles the optional Monte-Carlo kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so compilation failures are downgraded to a warning.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "dsepp._mc_cython",
                ["src/dsepp/_mc_cython.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    warnings.warn(f"Cython kernel not built ({exc}); using numpy fallback.")
    ext_modules = []

# Package metadata lives in pyproject.toml; the explicit layout keys keep
# legacy setuptools code paths (< 61) working with the src/ layout.
setup(
    name="dsepp",
    version="0.1.0",
    package_dir={"": "src"},
    packages=["dsepp"],
    entry_points={"console_scripts": ["dsepp = dsepp.cli:main"]},
    ext_modules=ext_modules,
)
