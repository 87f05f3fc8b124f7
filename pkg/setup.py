"""Build the optional Cython kernel; the package works without it."""
from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    print("Cython/numpy not available, installing the pure-Python kernel only")
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "nsdiv._kernels_c",
                ["src/nsdiv/_kernels_c.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
