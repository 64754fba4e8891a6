"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed build of densitylab.kernels._fast is not fatal
for development installs; `pip install -e . --no-build-isolation` will
compile it when cython is available.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - cython is a build requirement
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "densitylab.kernels._fast",
                ["src/densitylab/kernels/_fast.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
