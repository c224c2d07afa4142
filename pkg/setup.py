import os

from setuptools import setup


def ext_modules():
    """Build the compiled split-search kernels when Cython and a C toolchain
    are available; otherwise install pure-Python only (the package falls back
    at import time)."""
    if os.environ.get("SPEEDCLASS_SKIP_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "speedclass._kernels",
        sources=[os.path.join("src", "speedclass", "_kernels.pyx")],
        language="c++",
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=ext_modules())
