from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "aqcstab._kernels",
                ["src/aqcstab/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            ),
            # the pure-Python value layer, compiled as-is
            Extension(
                "aqcstab._padic_c",
                ["src/aqcstab/_padic.py"],
                extra_compile_args=["-O3"],
                optional=True,
            ),
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
