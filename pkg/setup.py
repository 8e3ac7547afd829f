from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = [
        Extension(
            "nlqw._kernels",
            ["src/nlqw/_kernels.pyx"],
            extra_compile_args=["-O3", "-ffp-contract=off",
                                "-fno-builtin-sin", "-fno-builtin-cos"],
        )
    ]
    setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
else:
    # No Cython available: install the pure-Python package; the numpy
    # fallback kernels are picked up at import time.
    setup()
