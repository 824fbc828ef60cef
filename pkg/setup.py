from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to pure Python
# (zarmod._kernels.pyfallback) when the extension is unavailable.
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "zarmod._kernels.cfkern",
                ["src/zarmod/_kernels/cfkern.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
